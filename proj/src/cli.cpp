#include "mtffm/cli.hpp"

#include "mtffm/kapteyn.hpp"
#include "mtffm/metrics.hpp"
#include "mtffm/optimizer.hpp"
#include "mtffm/special_functions.hpp"
#include "mtffm/waveform.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

namespace mtffm::cli {
namespace {

namespace fs = std::filesystem;

OptimizerConfig optimizer_config(const DesignConfig& cfg)
{
    OptimizerConfig ocfg;
    ocfg.delta = cfg.delta;
    ocfg.max_evals = std::max(1, cfg.max_evals);  // 0 = evaluate-only
    ocfg.penalty_weight = cfg.penalty_weight;
    ocfg.step_init = cfg.step_init;
    ocfg.step_tol = cfg.step_tol;
    ocfg.kapteyn_tol = cfg.kapteyn_tol;
    ocfg.kapteyn_cap = cfg.kapteyn_cap;
    ocfg.acf_oversample = cfg.acf_oversample;
    return ocfg;
}

DesignCoefficients initial_coefficients(const DesignConfig& cfg)
{
    if (!cfg.z.empty()) return DesignCoefficients(cfg.z);
    return random_init(cfg.K, cfg.seed, cfg.margin);
}

DesignCoefficients coefficients_from_csv(const fs::path& file)
{
    const CsvTable table = read_table_csv(file);
    for (const char* name : {"z_opt", "z"}) {
        const auto it = std::find(table.header.begin(), table.header.end(), name);
        if (it != table.header.end())
            return DesignCoefficients(table.columns[it - table.header.begin()]);
    }
    throw ConfigError("coefficients file '" + file.string() +
                      "' has no 'z_opt' or 'z' column");
}

std::vector<double> linspace(double lo, double hi, int n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = 0.5 * (lo + hi);
        return out;
    }
    for (int i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

// ---------------------------------------------------------------------------
// verify: identity suite
// ---------------------------------------------------------------------------

struct Check {
    std::string name;
    double measured = 0.0;
    double tol = 0.0;
    bool pass = false;
};

Check make_check(std::string name, double measured, double tol)
{
    const bool pass = measured <= tol;
    return {std::move(name), measured, tol, pass};
}

double nielsen_sum(double z)
{
    long double sum = 0.0L;
    for (int m = 1; m <= 4096; ++m) {
        const double jm = bessel_j(m, m * z);
        const long double term = static_cast<long double>(jm / m) * (jm / m);
        sum += term;
        if (m >= 16 && term < 1e-18L) break;
    }
    return static_cast<double>(sum);
}

void check_nielsen(std::vector<Check>& checks)
{
    for (double z : {0.1, 0.5, 0.9}) {
        char name[48];
        std::snprintf(name, sizeof name, "nielsen z=%.1f", z);
        checks.push_back(make_check(name,
            std::fabs(nielsen_sum(z) - 0.25 * z * z), 1e-8));
    }
}

void check_kapteyn_identity(std::vector<Check>& checks, bool inject_fault)
{
    const std::pair<int, std::uint64_t> cases[] = {
        {1, 101}, {2, 102}, {4, 103}, {8, 104}, {32, 105}};
    bool first = true;
    for (const auto& [K, seed] : cases) {
        const DesignCoefficients z = random_init(K, seed, 0.95);
        KapteynExpansion exp = kapteyn_coefficients(z);
        if (inject_fault && first) exp.b[0] += 1e-3;
        first = false;

        long double lhs = 0.0L, rhs = 0.0L;
        for (double b : exp.b) lhs += static_cast<long double>(b) * b;
        for (double v : z.z) rhs += static_cast<long double>(v) * v;

        char name[48];
        std::snprintf(name, sizeof name, "kapteyn_identity K=%d", K);
        checks.push_back(make_check(name,
            std::fabs(static_cast<double>(lhs - rhs)), 1e-8));
    }
}

void check_kepler(std::vector<Check>& checks)
{
    struct Case {
        std::string name;
        DesignCoefficients z;
    };
    const Case cases[] = {
        {"kepler K=1", DesignCoefficients({0.5})},
        {"kepler K=4", random_init(4, 111, 0.95)},
        {"kepler K=8", random_init(8, 112, 0.95)},
    };
    for (const auto& c : cases) {
        const KapteynExpansion exp = kapteyn_coefficients(c.z);
        double worst = 0.0;
        for (int j = 0; j < 100; ++j) {
            const double psi = -std::numbers::pi + 4.0 * std::numbers::pi * j / 99.0;
            double series = 0.0;
            for (int m = 1; m <= exp.order_count(); ++m)
                series += exp.b[m - 1] * std::sin(m * psi);
            const double direct = invert_kepler(psi, c.z) - psi;
            worst = std::max(worst, std::fabs(series - direct));
        }
        checks.push_back(make_check(c.name, worst, 1e-8));
    }
}

void check_waveform_level(std::vector<Check>& checks, const DesignConfig* cfg)
{
    double T = 1.0, delta_f = 20.0;
    DesignCoefficients z = random_init(4, 121, 0.95);
    if (cfg) {
        T = cfg->T;
        delta_f = cfg->delta_f;
        z = initial_coefficients(*cfg);
    }

    const WaveformParams params = make_waveform_params(T, delta_f, z);
    const FourierLineCoefficients lines = fourier_lines(params, 1e-12);

    // Closed form vs. direct quadrature of the ambiguity integral.
    const SampledWaveform wf = synthesize(params, 128.0 * delta_f);
    const double dt = wf.dt();
    double worst = 0.0;
    for (double tau_frac : {0.0, 0.1234, -0.1234, 0.5, -0.5, 0.875}) {
        const double tau = 2.0 * std::llround(tau_frac * T / (2.0 * dt)) * dt;
        for (double nu_scale : {0.0, 1.7, -1.7, 6.3, -6.3}) {
            const double nu = nu_scale / T;
            const auto gap = ambiguity_closed(lines, tau, nu) -
                             ambiguity_numeric(wf, tau, nu);
            worst = std::max(worst, std::abs(gap));
        }
    }
    checks.push_back(make_check("af closed_vs_numeric", worst, 1e-5));

    // The three RMS-bandwidth routes.
    const double beta_direct = rms_bandwidth_direct(params.coeffs, params.A);
    const double beta_kapteyn = rms_bandwidth_kapteyn(params.expansion, params.A);
    const double beta_spectral =
        rms_bandwidth_spectral(synthesize(params, 16.0 * delta_f));
    checks.push_back(make_check("beta kapteyn_vs_direct",
        std::fabs(beta_kapteyn - beta_direct) / beta_direct, 1e-8));
    checks.push_back(make_check("beta spectral_vs_direct",
        std::fabs(beta_spectral - beta_direct) / beta_direct, 5e-3));
}

// ---------------------------------------------------------------------------
// design artifact writers
// ---------------------------------------------------------------------------

void write_coefficients(const fs::path& dir, const std::vector<double>& z_init,
                        const std::vector<double>& z_opt)
{
    std::vector<double> index(z_init.size());
    for (std::size_t i = 0; i < index.size(); ++i) index[i] = static_cast<double>(i + 1);
    write_table_csv(dir / "coefficients.csv", {"k", "z_init", "z_opt"},
                    {index, z_init, z_opt});
}

void write_trace(const fs::path& dir, const OptimizationTrace& trace)
{
    std::vector<double> evals, isr, violation, wsum;
    for (const auto& rec : trace.iterations) {
        evals.push_back(rec.eval_count);
        isr.push_back(rec.isr_db);
        violation.push_back(rec.band_violation);
        wsum.push_back(rec.weighted_sum);
    }
    write_table_csv(dir / "trace.csv",
                    {"eval_count", "isr_db", "band_violation", "weighted_sum"},
                    {evals, isr, violation, wsum});
}

void write_acf(const fs::path& dir, const AcfPowerGrid& grid)
{
    std::vector<double> tau(grid.power.size()), mag(grid.power.size());
    for (std::size_t k = 0; k < grid.power.size(); ++k) {
        tau[k] = k * grid.step;
        mag[k] = std::sqrt(grid.power[k]);
    }
    write_table_csv(dir / "acf.csv", {"tau_s", "acf_abs", "acf_power"},
                    {tau, mag, grid.power});
}

void write_spectrum(const fs::path& dir, const FourierLineCoefficients& lines,
                    double delta_f, int points)
{
    const auto f = linspace(-delta_f, delta_f, points);
    const auto s = spectrum(lines, f);
    std::vector<double> re(s.size()), im(s.size()), mag(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        re[i] = s[i].real();
        im[i] = s[i].imag();
        mag[i] = std::abs(s[i]);
    }
    write_table_csv(dir / "spectrum.csv", {"f_hz", "re", "im", "abs"},
                    {f, re, im, mag});
}

void write_af_surface(const fs::path& dir, const FourierLineCoefficients& lines,
                      double T, int tau_points, int nu_points, double nu_max)
{
    const auto tau = linspace(-T, T, tau_points);
    const auto nu = linspace(-nu_max, nu_max, nu_points);
    const AmbiguitySurface surf = ambiguity_surface(lines, tau, nu);
    write_matrix_csv(dir / "af_surface.csv", "tau_s\\nu_hz", surf.nu_axis,
                     surf.tau_axis, surf.magnitude);
}

void write_spectrogram(const fs::path& dir, const SampledWaveform& wf,
                       int window, int hop)
{
    const auto n = static_cast<int>(wf.size());
    if (window <= 0) window = std::clamp(n / 16 & ~1, 16, n);
    if (hop <= 0) hop = std::max(1, window / 4);
    const Spectrogram sg = spectrogram(wf, window, hop);
    write_matrix_csv(dir / "spectrogram.csv", "t_s\\f_hz", sg.freq_axis,
                     sg.time_axis, sg.power);
}

void write_waveform(const fs::path& dir, const SampledWaveform& wf,
                    const WaveformParams& params)
{
    const auto n = wf.size();
    std::vector<double> t(n), re(n), im(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = wf.time_at(i);
        re[i] = wf.samples[i].real();
        im[i] = wf.samples[i].imag();
    }
    const std::vector<double> mod = modulation_function(params, t);
    write_table_csv(dir / "waveform.csv", {"t_s", "re", "im", "mod_hz"},
                    {t, re, im, mod});
}

void write_lines(const fs::path& dir, const FourierLineCoefficients& lines)
{
    std::vector<double> idx, f, re, im, mag;
    for (int l = -lines.L; l <= lines.L; ++l) {
        const auto c = lines.line(l);
        idx.push_back(l);
        f.push_back(l / lines.T);
        re.push_back(c.real());
        im.push_back(c.imag());
        mag.push_back(std::abs(c));
    }
    write_table_csv(dir / "lines.csv", {"l", "f_hz", "re", "im", "abs"},
                    {idx, f, re, im, mag});
}

}  // namespace

fs::path resolve_output_dir(const DesignConfig& config)
{
    if (const char* env = std::getenv("MTFFM_OUTPUT_DIR"); env && *env)
        return fs::path(env);
    return fs::path(config.output_dir);
}

int run_design(const DesignConfig& config)
{
    const fs::path dir = resolve_output_dir(config);
    fs::create_directories(dir);

    const DesignCoefficients init = initial_coefficients(config);
    const OptimizerConfig ocfg = optimizer_config(config);
    const OptimizationTrace trace = optimize(init, config.T, config.delta_f, ocfg);

    const DesignCoefficients best(trace.best_z);
    // One evaluation pipeline for everything written to disk: the same
    // expansion settings the optimizer used, so the summary reproduces the
    // trace exactly and the round-trip check is meaningful.
    const WaveformParams params = make_waveform_params(
        config.T, config.delta_f, best, config.kapteyn_tol, config.kapteyn_cap);
    const SampledWaveform wf_metrics =
        synthesize(params, config.acf_oversample * config.delta_f);
    const AcfPowerGrid acf_grid = acf_power_grid(wf_metrics);
    const double tau_m = mainlobe_null(acf_grid.power, acf_grid.step);
    const IsrResult isr_final = isr(acf_grid, tau_m, config.T, config.delta_f);

    const double beta_direct = rms_bandwidth_direct(best, params.A);
    const double beta_kapteyn = rms_bandwidth_kapteyn(params.expansion, params.A);
    const double beta_spectral = rms_bandwidth_spectral(wf_metrics);

    const FourierLineCoefficients lines = fourier_lines(params, config.energy_tol);
    const double export_rate =
        config.sample_rate > 0.0 ? config.sample_rate : 16.0 * config.delta_f;
    const SampledWaveform wf_export = synthesize(params, export_rate);

    write_coefficients(dir, init.z, best.z);
    write_trace(dir, trace);
    write_acf(dir, acf_grid);
    write_spectrum(dir, lines, config.delta_f, config.spectrum_points);
    const double nu_max = config.af_nu_max > 0.0 ? config.af_nu_max : 10.0 / config.T;
    write_af_surface(dir, lines, config.T, config.af_tau_points,
                     config.af_nu_points, nu_max);
    write_spectrogram(dir, wf_export, config.spectrogram_window,
                      config.spectrogram_hop);
    write_waveform(dir, wf_export, params);
    write_lines(dir, lines);

    std::vector<std::pair<std::string, std::string>> summary;
    auto put = [&summary](const std::string& key, double v) {
        summary.emplace_back(key, format_double(v));
    };
    put("T_s", config.T);
    put("delta_f_hz", config.delta_f);
    put("tbp", config.T * config.delta_f);
    put("K", init.harmonic_count());
    put("seed", static_cast<double>(config.seed));
    put("delta", config.delta);
    put("max_evals", config.max_evals);
    put("eval_total", trace.eval_total);
    put("A_hz", params.A);
    put("weighted_sum", best.weighted_sum());
    put("beta2_target", trace.beta2_target);
    put("initial_isr_db", trace.initial_isr_db);
    put("final_isr_db", trace.final_isr_db);
    put("improvement_db", trace.initial_isr_db - trace.final_isr_db);
    put("tau_m_s", tau_m);
    put("beta_direct", beta_direct);
    put("beta_kapteyn", beta_kapteyn);
    put("beta_spectral", beta_spectral);
    put("beta2_direct", beta_direct * beta_direct);
    put("beta2_kapteyn", beta_kapteyn * beta_kapteyn);
    put("beta2_spectral", beta_spectral * beta_spectral);
    put("line_order", lines.L);
    put("line_energy_deficit", lines.energy_deficit());
    put("sample_rate_hz", wf_export.sample_rate);
    write_kv_csv(dir / "summary.csv", summary);

    std::printf("design: TBP %.6g, K %d, seed %llu\n", config.T * config.delta_f,
                init.harmonic_count(),
                static_cast<unsigned long long>(config.seed));
    std::printf("  ISR %.4f dB -> %.4f dB (%d evaluations)\n",
                trace.initial_isr_db, trace.final_isr_db, trace.eval_total);
    std::printf("  artifacts in %s\n", dir.string().c_str());
    return 0;
}

int run_verify(const std::optional<DesignConfig>& config, bool inject_fault)
{
    std::vector<Check> checks;
    check_nielsen(checks);
    check_kapteyn_identity(checks, inject_fault);
    check_kepler(checks);
    check_waveform_level(checks, config ? &*config : nullptr);

    bool all_pass = true;
    for (const auto& c : checks) {
        std::printf("[%s] %-28s measured=%.3e  tol=%.0e\n",
                    c.pass ? " ok " : "FAIL", c.name.c_str(), c.measured, c.tol);
        all_pass = all_pass && c.pass;
    }
    std::printf("verify: %zu/%zu checks passed\n",
                static_cast<std::size_t>(
                    std::count_if(checks.begin(), checks.end(),
                                  [](const Check& c) { return c.pass; })),
                checks.size());
    return all_pass ? 0 : 3;
}

int run_af_surface(const DesignConfig& config, int tau_points, int nu_points,
                   double nu_max,
                   const std::optional<fs::path>& coefficients)
{
    const fs::path dir = resolve_output_dir(config);
    fs::create_directories(dir);

    const DesignCoefficients z = coefficients
        ? coefficients_from_csv(*coefficients)
        : initial_coefficients(config);
    const WaveformParams params = make_waveform_params(
        config.T, config.delta_f, z, config.kapteyn_tol, config.kapteyn_cap);
    const FourierLineCoefficients lines = fourier_lines(params, config.energy_tol);

    if (tau_points <= 0) tau_points = config.af_tau_points;
    if (nu_points <= 0) nu_points = config.af_nu_points;
    if (nu_max <= 0.0)
        nu_max = config.af_nu_max > 0.0 ? config.af_nu_max : 10.0 / config.T;

    write_af_surface(dir, lines, config.T, tau_points, nu_points, nu_max);
    std::printf("af-surface: %dx%d grid -> %s\n", tau_points, nu_points,
                (dir / "af_surface.csv").string().c_str());
    return 0;
}

int run_export_waveform(const DesignConfig& config,
                        const std::optional<fs::path>& coefficients)
{
    const fs::path dir = resolve_output_dir(config);
    fs::create_directories(dir);

    const DesignCoefficients z = coefficients
        ? coefficients_from_csv(*coefficients)
        : initial_coefficients(config);
    const WaveformParams params = make_waveform_params(
        config.T, config.delta_f, z, config.kapteyn_tol, config.kapteyn_cap);
    const double rate =
        config.sample_rate > 0.0 ? config.sample_rate : 16.0 * config.delta_f;
    const SampledWaveform wf = synthesize(params, rate);

    write_waveform(dir, wf, params);
    write_lines(dir, fourier_lines(params, config.energy_tol));
    std::printf("export-waveform: %zu samples at %.6g Hz -> %s\n", wf.size(),
                wf.sample_rate, dir.string().c_str());
    return 0;
}

int dispatch(int argc, const char* const* argv)
{
    CLI::App app{"Multi-tone feedback FM waveform design"};
    app.require_subcommand(1);

    std::string design_config, verify_config, af_config, export_config;
    std::string af_coeffs, export_coeffs;
    bool inject_fault = false;
    int tau_points = 0, nu_points = 0;
    double nu_max = 0.0;

    auto* design = app.add_subcommand("design",
        "Optimize a design from a config file and export all artifacts");
    design->add_option("config", design_config, "key = value config file")
        ->required();

    auto* verify = app.add_subcommand("verify",
        "Run the identity suite (Nielsen, Kapteyn, Kepler, AF, bandwidth)");
    verify->add_option("config", verify_config,
                       "optional config supplying the waveform-level checks");
    verify->add_flag("--inject-fault", inject_fault)->group("");

    auto* af = app.add_subcommand("af-surface",
        "Evaluate |chi(tau, nu)| on a grid and write it as a matrix CSV");
    af->add_option("config", af_config)->required();
    af->add_option("--tau-points", tau_points, "delay grid size");
    af->add_option("--nu-points", nu_points, "Doppler grid size");
    af->add_option("--nu-max", nu_max, "Doppler half-span in Hz");
    af->add_option("--coefficients", af_coeffs,
                   "coefficients.csv from a previous design run");

    auto* exporter = app.add_subcommand("export-waveform",
        "Write sampled waveform and Fourier line table");
    exporter->add_option("config", export_config)->required();
    exporter->add_option("--coefficients", export_coeffs,
                         "coefficients.csv from a previous design run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto opt_path = [](const std::string& s) {
        return s.empty() ? std::optional<fs::path>{} : std::optional<fs::path>{s};
    };

    try {
        if (design->parsed())
            return run_design(load_design_config(design_config));
        if (verify->parsed()) {
            std::optional<DesignConfig> cfg;
            if (!verify_config.empty()) cfg = load_design_config(verify_config);
            return run_verify(cfg, inject_fault);
        }
        if (af->parsed())
            return run_af_surface(load_design_config(af_config), tau_points,
                                  nu_points, nu_max, opt_path(af_coeffs));
        if (exporter->parsed())
            return run_export_waveform(load_design_config(export_config),
                                       opt_path(export_coeffs));
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

}  // namespace mtffm::cli
