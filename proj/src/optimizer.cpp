#include "mtffm/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace mtffm {
namespace {

void validate_config(const OptimizerConfig& cfg)
{
    if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0))
        throw std::invalid_argument("optimize: delta must lie in (0, 1)");
    if (cfg.max_evals < 1)
        throw std::invalid_argument("optimize: max_evals must be >= 1");
    if (!(cfg.step_init > 0.0) || !(cfg.step_tol > 0.0))
        throw std::invalid_argument("optimize: step sizes must be positive");
    if (!(cfg.penalty_weight >= 0.0))
        throw std::invalid_argument("optimize: penalty_weight must be >= 0");
}

ObjectiveValue evaluate(const DesignCoefficients& z, double T, double delta_f,
                        double beta2_target, const OptimizerConfig& cfg)
{
    const WaveformParams params =
        make_waveform_params(T, delta_f, z, cfg.kapteyn_tol, cfg.kapteyn_cap);
    const SampledWaveform wf =
        synthesize(params, cfg.acf_oversample * delta_f);
    const IsrResult res = isr_of_waveform(wf, delta_f);

    ObjectiveValue val;
    val.isr_linear = res.sidelobe_area / res.mainlobe_area;
    val.isr_db = res.isr_db;
    const double beta = rms_bandwidth_direct(params.coeffs, params.A);
    val.beta2 = beta * beta;

    if (beta2_target > 0.0) {
        const double ratio = val.beta2 / beta2_target;
        val.band_violation = std::max({0.0, (1.0 - cfg.delta) - ratio,
                                       ratio - (1.0 + cfg.delta)});
    }
    val.penalized = val.isr_linear +
                    cfg.penalty_weight * val.band_violation * val.band_violation;
    return val;
}

}  // namespace

DesignCoefficients random_init(int harmonic_count, std::uint64_t seed,
                               double margin)
{
    if (harmonic_count < 1)
        throw std::invalid_argument("random_init: harmonic_count must be >= 1");
    if (!(margin > 0.0) || margin > 1.0)
        throw std::invalid_argument("random_init: margin must lie in (0, 1]");

    std::mt19937_64 rng(seed);
    auto uniform = [&rng] {
        // (0, 1): never 0, so log() below is safe.
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };

    std::vector<double> z(harmonic_count);
    for (;;) {
        for (int i = 0; i < harmonic_count; i += 2) {
            const double r = std::sqrt(-2.0 * std::log(uniform()));
            const double angle = 2.0 * std::numbers::pi * uniform();
            z[i] = r * std::cos(angle);
            if (i + 1 < harmonic_count) z[i + 1] = r * std::sin(angle);
        }
        double wsum = 0.0;
        for (int k = 0; k < harmonic_count; ++k)
            wsum += (k + 1) * std::fabs(z[k]);
        if (wsum > 0.0) {
            for (auto& v : z) v *= margin / wsum;
            return DesignCoefficients(std::move(z));
        }
    }
}

DesignCoefficients project_convergence(std::span<const double> z)
{
    double wsum = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (!std::isfinite(z[k]))
            throw std::invalid_argument("project_convergence: non-finite entry");
        wsum += (k + 1) * std::fabs(z[k]);
    }
    std::vector<double> out(z.begin(), z.end());
    if (wsum > 1.0) {
        const double scale = 1.0 / wsum;
        for (auto& v : out) v *= scale;
    }
    return DesignCoefficients(std::move(out));
}

ObjectiveValue objective(const DesignCoefficients& z, double T, double delta_f,
                         double beta2_target, const OptimizerConfig& config)
{
    if (!(beta2_target > 0.0))
        throw std::invalid_argument("objective: beta2_target must be positive");
    return evaluate(z, T, delta_f, beta2_target, config);
}

OptimizationTrace optimize(const DesignCoefficients& init, double T,
                           double delta_f, const OptimizerConfig& cfg)
{
    validate_config(cfg);
    if (init.weighted_sum() == 0.0)
        throw std::invalid_argument(
            "optimize: initial design is unmodulated (all z_k are zero)");

    const int K = init.harmonic_count();
    DesignCoefficients current = project_convergence(init.z);

    OptimizationTrace trace;
    // The starting design defines the band centre; its own violation is 0.
    ObjectiveValue cur_val = evaluate(current, T, delta_f, 0.0, cfg);
    const double beta2_target = cur_val.beta2;
    if (!(beta2_target > 0.0))
        throw std::invalid_argument(
            "optimize: initial design has zero RMS bandwidth");
    cur_val.penalized = cur_val.isr_linear;

    trace.beta2_target = beta2_target;
    trace.initial_isr_db = cur_val.isr_db;
    trace.eval_total = 1;
    trace.iterations.push_back(
        {1, cur_val.isr_db, 0.0, current.weighted_sum()});

    std::vector<double> best_z = current.z;
    double best_isr_linear = cur_val.isr_linear;
    double best_isr_db = cur_val.isr_db;

    double step = cfg.step_init;
    int cursor = 0;  // poll direction to try first, cycled on success

    while (trace.eval_total < cfg.max_evals && step > cfg.step_tol) {
        bool improved = false;
        for (int probe = 0; probe < 2 * K; ++probe) {
            const int dir = (cursor + probe) % (2 * K);
            const int k = dir / 2;
            const double sign = (dir % 2 == 0) ? 1.0 : -1.0;

            std::vector<double> cand = current.z;
            cand[k] += sign * step / (k + 1);
            DesignCoefficients candidate = project_convergence(cand);

            ObjectiveValue val;
            try {
                val = evaluate(candidate, T, delta_f, beta2_target, cfg);
            } catch (const MetricUndefined&) {
                // Degenerate candidate (no mainlobe null); treat as +inf.
                val.penalized = std::numeric_limits<double>::infinity();
            }
            ++trace.eval_total;

            if (val.penalized < cur_val.penalized) {
                current = std::move(candidate);
                cur_val = val;
                trace.iterations.push_back({trace.eval_total, val.isr_db,
                                            val.band_violation,
                                            current.weighted_sum()});
                if (val.band_violation == 0.0 && val.isr_linear < best_isr_linear) {
                    best_z = current.z;
                    best_isr_linear = val.isr_linear;
                    best_isr_db = val.isr_db;
                }
                cursor = (dir + 1) % (2 * K);
                improved = true;
                break;
            }
            if (trace.eval_total >= cfg.max_evals) break;
        }
        step = improved ? step * cfg.step_grow : step * cfg.step_shrink;
    }

    trace.best_z = std::move(best_z);
    trace.final_isr_db = best_isr_db;
    return trace;
}

}  // namespace mtffm
