#include <doctest.h>

#include "mtffm/optimizer.hpp"
#include "mtffm/waveform.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace mtffm;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x) { return std::fabs(x) < 1e-12 ? 1.0 : std::sin(x) / x; }

WaveformParams small_params(std::uint64_t seed = 404, int K = 4,
                            double T = 1.0, double delta_f = 20.0)
{
    return make_waveform_params(T, delta_f, random_init(K, seed, 0.95));
}

// Linear FM pulse s(t) = (1/sqrt(T)) exp(j pi kappa t^2) assembled by hand:
// an out-of-family reference whose ambiguity function is known analytically,
//   chi(tau, nu) = ((T-|tau|)/T) sinc(pi (nu - kappa tau) (T-|tau|)).
SampledWaveform make_lfm(double T, double bandwidth, double sample_rate)
{
    SampledWaveform wf;
    const auto n = static_cast<std::size_t>(std::llround(sample_rate * T));
    wf.T = T;
    wf.sample_rate = static_cast<double>(n) / T;
    wf.samples.resize(n);
    const double kappa = bandwidth / T;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = -0.5 * T + i / wf.sample_rate;
        wf.samples[i] = std::polar(1.0 / std::sqrt(T), kPi * kappa * t * t);
    }
    return wf;
}

}  // namespace

TEST_CASE("synthesize: grid snap, unit energy, constant envelope")
{
    const WaveformParams params = small_params();
    const SampledWaveform wf = synthesize(params, 16.3 * params.delta_f);

    // Snapped so the grid tiles the period exactly.
    CHECK(wf.size() == static_cast<std::size_t>(std::llround(16.3 * 20.0)));
    CHECK(wf.sample_rate == doctest::Approx(wf.size() / params.T).epsilon(1e-15));
    CHECK(wf.time_at(0) == doctest::Approx(-0.5 * params.T));

    long double energy = 0.0L;
    for (const auto& s : wf.samples) energy += std::norm(s);
    CHECK(std::fabs(static_cast<double>(energy) / wf.sample_rate - 1.0) < 1e-12);

    const double want = 1.0 / std::sqrt(params.T);
    for (const auto& s : wf.samples)
        CHECK(std::fabs(std::abs(s) - want) < 1e-13);

    CHECK_THROWS_AS(synthesize(params, 7.9 * params.delta_f), std::invalid_argument);
}

TEST_CASE("fourier_lines captures the envelope energy")
{
    const WaveformParams params = small_params();
    const FourierLineCoefficients lines = fourier_lines(params, 1e-10);

    CHECK(lines.L >= 1);
    CHECK(lines.L <= 16 * static_cast<int>(std::ceil(params.tbp())));
    CHECK(lines.energy_deficit() >= -1e-12);  // Parseval: can't exceed 1
    CHECK(lines.energy_deficit() <= 1e-10);
    CHECK(std::abs(lines.line(lines.L + 5)) == 0.0);  // out of range -> 0

    CHECK_THROWS_AS(fourier_lines(params, 0.0), std::invalid_argument);
}

TEST_CASE("spectrum matches direct Fourier quadrature of the samples")
{
    const WaveformParams params = small_params(505);
    const FourierLineCoefficients lines = fourier_lines(params, 1e-12);
    const SampledWaveform wf = synthesize(params, 32.0 * params.delta_f);

    std::vector<double> f;
    for (int j = -20; j <= 20; ++j) f.push_back(0.6 * params.delta_f * j / 20.0);
    const auto closed = spectrum(lines, f);

    const double dt = wf.dt();
    const auto n = static_cast<long long>(wf.size());
    double worst = 0.0, scale = 0.0;
    for (std::size_t q = 0; q < f.size(); ++q) {
        std::complex<double> acc = 0.0;
        for (long long i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 0.5 : 1.0;
            const auto s = wf.samples[i == n ? 0 : i];  // s(T/2) = s(-T/2)
            acc += w * s * std::polar(1.0, -kTwoPi * f[q] * wf.time_at(i));
        }
        acc *= dt;
        worst = std::max(worst, std::abs(closed[q] - acc));
        scale = std::max(scale, std::abs(acc));
    }
    CHECK(worst / scale < 1e-3);
}

TEST_CASE("closed-form ambiguity: origin value, symmetry, ACF cut")
{
    const WaveformParams params = small_params(606);
    const FourierLineCoefficients lines = fourier_lines(params, 1e-12);

    CHECK(std::abs(ambiguity_closed(lines, 0.0, 0.0) - 1.0) < 1e-9);
    CHECK(std::abs(ambiguity_closed(lines, 1.5 * params.T, 0.0)) == 0.0);

    for (double tau : {0.07, 0.31, -0.55}) {
        for (double nu : {0.0, 2.7, -11.0}) {
            const auto a = ambiguity_closed(lines, tau, nu);
            const auto b = ambiguity_closed(lines, -tau, -nu);
            CHECK(std::abs(a - std::conj(b)) < 1e-12);
            CHECK(std::abs(a) < 1.0 + 1e-9);
        }
    }
    CHECK(acf(lines, 0.21) == ambiguity_closed(lines, 0.21, 0.0));
}

TEST_CASE("ambiguity_numeric reproduces the analytic LFM reference")
{
    const double T = 1.0, B = 20.0;
    const SampledWaveform lfm = make_lfm(T, B, 128.0 * B);
    const double dt = lfm.dt();

    double worst = 0.0;
    for (double tau_raw : {0.0, 0.1, -0.25, 0.5, 0.8}) {
        const double tau = 2.0 * std::llround(tau_raw / (2.0 * dt)) * dt;
        for (double nu : {0.0, 1.0, -3.0, 7.5}) {
            const double w = T - std::fabs(tau);
            const double want = (w / T) * sinc(kPi * (nu - B / T * tau) * w);
            const auto got = ambiguity_numeric(lfm, tau, nu);
            worst = std::max(worst, std::abs(got - std::complex<double>(want)));
        }
    }
    CHECK(worst < 1e-5);

    // Beyond the pulse there is no overlap.
    CHECK(std::abs(ambiguity_numeric(lfm, 1.01 * T, 0.0)) == 0.0);
    // Delay snapping: nearby taus collapse onto the same grid value.
    const auto a = ambiguity_numeric(lfm, 100.2 * dt, 3.0);
    const auto b = ambiguity_numeric(lfm, 100.0 * dt, 3.0);
    CHECK(std::abs(a - b) == 0.0);
}

TEST_CASE("closed-form and numeric ambiguity agree for an MT-FFM design")
{
    const WaveformParams params = small_params(707);
    const FourierLineCoefficients lines = fourier_lines(params, 1e-12);
    const SampledWaveform wf = synthesize(params, 128.0 * params.delta_f);
    const double dt = wf.dt();

    double worst = 0.0;
    for (double tau_frac : {0.0, 0.123, -0.4, 0.77}) {
        const double tau =
            2.0 * std::llround(tau_frac * params.T / (2.0 * dt)) * dt;
        for (double nu_scale : {0.0, 1.3, -4.9, 8.0}) {
            const double nu = nu_scale / params.T;
            worst = std::max(worst, std::abs(ambiguity_closed(lines, tau, nu) -
                                             ambiguity_numeric(wf, tau, nu)));
        }
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("ambiguity_surface agrees with pointwise evaluation")
{
    const WaveformParams params = small_params(808);
    const FourierLineCoefficients lines = fourier_lines(params, 1e-10);

    const std::vector<double> tau{-0.8, -0.2, 0.0, 0.33, 1.2};
    const std::vector<double> nu{-6.0, 0.0, 2.5};
    const AmbiguitySurface surf = ambiguity_surface(lines, tau, nu);

    REQUIRE(surf.magnitude.size() == tau.size() * nu.size());
    for (std::size_t i = 0; i < tau.size(); ++i)
        for (std::size_t j = 0; j < nu.size(); ++j)
            CHECK(surf.at(i, j) ==
                  doctest::Approx(std::abs(ambiguity_closed(lines, tau[i], nu[j])))
                      .epsilon(1e-12));

    const AmbiguitySurface origin =
        ambiguity_surface(lines, std::vector{0.0}, std::vector{0.0});
    CHECK(origin.at(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("spectrogram ridge follows the modulation function")
{
    // Single-harmonic design: a smooth sinusoid-like sweep whose ridge moves
    // slowly relative to the analysis window.
    const WaveformParams params =
        make_waveform_params(1.0, 80.0, DesignCoefficients({0.5}));
    const SampledWaveform wf = synthesize(params, 32.0 * params.delta_f);
    const int window = 256, hop = 64;
    const Spectrogram sg = spectrogram(wf, window, hop);

    REQUIRE(sg.frame_count > 10);
    REQUIRE(sg.bin_count == static_cast<std::size_t>(window));
    const double bin_width = wf.sample_rate / window;

    const std::vector<double> centers(sg.time_axis.begin(), sg.time_axis.end());
    const auto mod = modulation_function(params, centers);

    std::size_t hits = 0;
    for (std::size_t fr = 0; fr < sg.frame_count; ++fr) {
        std::size_t arg = 0;
        for (std::size_t b = 1; b < sg.bin_count; ++b)
            if (sg.power[fr * sg.bin_count + b] > sg.power[fr * sg.bin_count + arg])
                arg = b;
        if (std::fabs(sg.freq_axis[arg] - mod[fr]) <= 1.5 * bin_width) ++hits;
    }
    // Edge frames smear; the bulk must sit on the ridge.
    CHECK(hits >= sg.frame_count * 9 / 10);

    CHECK_THROWS_AS(spectrogram(wf, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(spectrogram(wf, window, 0), std::invalid_argument);
    CHECK_THROWS_AS(spectrogram(wf, static_cast<int>(wf.size()) + 1, 4),
                    std::invalid_argument);
}
