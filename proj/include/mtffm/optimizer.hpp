#pragma once

#include <cstdint>
#include <vector>

#include "mtffm/metrics.hpp"

namespace mtffm {

struct OptimizerConfig {
    double delta = 0.1;            ///< half-width of the RMS-bandwidth band
    int max_evals = 4000;          ///< objective evaluation budget
    double penalty_weight = 100.0; ///< quadratic band-penalty weight
    double step_init = 0.1;        ///< initial poll step (weighted-sum units)
    double step_tol = 1e-6;        ///< stop once the poll step shrinks below
    double step_grow = 1.5;        ///< expansion after an improving poll
    double step_shrink = 0.5;      ///< contraction after a full failed poll

    // Evaluation pipeline used while searching.  These are looser than the
    // library defaults: they define the objective the search actually
    // minimizes, trading ~1e-3 dB of ISR fidelity for a ~5x faster poll.
    double kapteyn_tol = 1e-10;
    int kapteyn_cap = 2048;
    double acf_oversample = 64.0;  ///< ACF grid density, samples per 1/delta_f
};

/// One accepted iterate (plus the starting point) in the search history.
struct TraceRecord {
    int eval_count = 0;        ///< objective evaluations consumed so far
    double isr_db = 0.0;       ///< ISR of the iterate, dB
    double band_violation = 0.0;  ///< relative beta^2 excursion outside the band
    double weighted_sum = 0.0; ///< sum_k k|z_k| of the iterate (audit trail)
};

struct OptimizationTrace {
    std::vector<TraceRecord> iterations;
    std::vector<double> best_z;   ///< best band-feasible design found
    double initial_isr_db = 0.0;
    double final_isr_db = 0.0;    ///< ISR of best_z under the search settings
    double beta2_target = 0.0;    ///< band centre, (rad/s)^2
    int eval_total = 0;
};

/// Gaussian design draw scaled so sum_k k|z_k| equals `margin` exactly.
/// Uses a fixed Box-Muller transform over std::mt19937_64 so that a given
/// (harmonic_count, seed, margin) triple reproduces bit-identically across
/// platforms; std::normal_distribution is implementation-defined and would
/// not.  Requires harmonic_count >= 1 and 0 < margin <= 1.
DesignCoefficients random_init(int harmonic_count, std::uint64_t seed,
                               double margin = 0.95);

/// Radial projection onto the convergence region: scales z by
/// min(1, 1 / sum_k k|z_k|).  Identity for already-valid vectors.
DesignCoefficients project_convergence(std::span<const double> z);

struct ObjectiveValue {
    double penalized = 0.0;      ///< isr_linear + weight * band_violation^2
    double isr_linear = 0.0;     ///< sidelobe_area / mainlobe_area
    double isr_db = 0.0;
    double band_violation = 0.0; ///< 0 when beta^2 is inside the band
    double beta2 = 0.0;          ///< (rad/s)^2, direct route
};

/// Penalized objective: the waveform's ISR plus a quadratic penalty on the
/// relative excursion of beta^2 = 2 pi^2 A^2 sum z_k^2 outside
/// [(1-delta), (1+delta)] * beta2_target.  Throws MetricUndefined when the
/// design has no resolvable mainlobe null.
ObjectiveValue objective(const DesignCoefficients& z, double T, double delta_f,
                         double beta2_target, const OptimizerConfig& config);

/// Compass (pattern) search over the design coefficients.
///
/// Polls +-h/k along each coordinate e_k -- the 1/k scaling gives every
/// direction the same first-order impact on the convergence margin
/// sum_k k|z_k| -- accepting the first strict improvement, cycling the poll
/// order from the last success.  Each candidate is projected back into the
/// convergence region before evaluation, so every iterate in the trace
/// satisfies sum_k k|z_k| <= 1 + 1e-12.  The step expands on success and
/// halves after a full unsuccessful poll, stopping at step_tol or when the
/// evaluation budget runs out.
///
/// The band constraint enters the search through the penalty, but `best_z`
/// tracks the best strictly band-feasible iterate seen, so the returned
/// design always has beta^2 inside the band (the initial point defines the
/// target, hence is feasible).  `final_isr_db` is best_z's ISR under the
/// same evaluation settings the search used.
OptimizationTrace optimize(const DesignCoefficients& init, double T,
                           double delta_f, const OptimizerConfig& config);

}  // namespace mtffm
