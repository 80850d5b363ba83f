#include "mtffm/waveform.hpp"

#include "mtffm/fft.hpp"
#include "mtffm/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mtffm {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sinc(double x)
{
    if (std::fabs(x) < 1e-6) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

std::vector<double> phase_on_period_grid(const WaveformParams& params, int n)
{
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i)
        t[i] = (static_cast<double>(i) / n - 0.5) * params.T;
    return phase_function(params, t);
}

double captured_energy(const std::vector<std::complex<double>>& c)
{
    long double e = 0.0L;
    for (const auto& v : c) e += std::norm(v);
    return static_cast<double>(e);
}

// Delay-slice cross products A_d = sum_{l'} u_{l'+d} conj(v_{l'}) with
// u_l = c_l exp(-j pi l tau / T) and v_l = c_l exp(+j pi l tau / T), so that
// chi(tau, nu) = (W/T) sum_d A_d sinc(pi W (nu + d/T)).  Grouping by the
// line difference d collapses the double sum over lines into 4L+1 sinc
// evaluations per Doppler cut.
std::vector<std::complex<double>> delay_slices(const FourierLineCoefficients& lines,
                                               double tau)
{
    const int L = lines.L;
    const int n = 2 * L + 1;
    std::vector<std::complex<double>> u(n), v(n);
    for (int l = -L; l <= L; ++l) {
        const std::complex<double> w = std::polar(1.0, -kPi * l * tau / lines.T);
        u[l + L] = lines.c[l + L] * w;
        v[l + L] = lines.c[l + L] * std::conj(w);
    }

    std::vector<std::complex<double>> slices(4 * L + 1);
    for (int d = -2 * L; d <= 2 * L; ++d) {
        const int lp_lo = std::max(-L, -L - d);
        const int lp_hi = std::min(L, L - d);
        std::complex<double> acc = 0.0;
        for (int lp = lp_lo; lp <= lp_hi; ++lp)
            acc += u[lp + d + L] * std::conj(v[lp + L]);
        slices[d + 2 * L] = acc;
    }
    return slices;
}

std::complex<double> ambiguity_from_slices(
    const std::vector<std::complex<double>>& slices, int L, double T,
    double tau, double nu)
{
    const double W = T - std::fabs(tau);
    std::complex<double> acc = 0.0;
    for (int d = -2 * L; d <= 2 * L; ++d)
        acc += slices[d + 2 * L] * sinc(kPi * W * (nu + d / T));
    return acc * (W / T);
}

}  // namespace

double FourierLineCoefficients::energy_deficit() const
{
    return 1.0 - captured_energy(c);
}

SampledWaveform synthesize(const WaveformParams& params, double sample_rate)
{
    if (!(sample_rate >= kMinOversampling * params.delta_f))
        throw std::invalid_argument(
            "synthesize: sample_rate must be at least 8x the swept bandwidth");

    const auto n = static_cast<std::size_t>(std::llround(sample_rate * params.T));
    if (n < 2) throw std::invalid_argument("synthesize: grid would be degenerate");

    SampledWaveform wf;
    wf.T = params.T;
    wf.sample_rate = static_cast<double>(n) / params.T;

    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = -0.5 * params.T + i / wf.sample_rate;
    const std::vector<double> phi = phase_function(params, t);

    const double amp = 1.0 / std::sqrt(params.T);
    wf.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        wf.samples[i] = std::polar(amp, phi[i]);
    return wf;
}

FourierLineCoefficients fourier_lines(const WaveformParams& params,
                                      double energy_tol)
{
    if (!(energy_tol > 0.0) || !(energy_tol < 1.0))
        throw std::invalid_argument("fourier_lines: energy_tol must be in (0,1)");

    const int cap = std::max(16, 16 * static_cast<int>(std::ceil(params.tbp())));
    int L = std::min(cap, std::max(16, static_cast<int>(std::ceil(0.5 * params.tbp())) + 8));

    FourierLineCoefficients lines;
    lines.T = params.T;
    for (;;) {
        // 8x line oversampling keeps alias images far outside the retained
        // band during the probe...
        const int n = 8 * L + 8;
        lines.c = fourier_line_coefficients(phase_on_period_grid(params, n), L);
        lines.L = L;
        const double deficit = 1.0 - captured_energy(lines.c);

        if (deficit <= energy_tol) {
            // ...and a doubled grid confirms the estimate wasn't alias-inflated.
            auto check = fourier_line_coefficients(
                phase_on_period_grid(params, 2 * n), L);
            const double deficit2 = 1.0 - captured_energy(check);
            lines.c = std::move(check);
            if (deficit2 <= energy_tol || L == cap) return lines;
        } else if (L == cap) {
            return lines;
        }
        L = std::min(cap, std::max(L + 16, (3 * L) / 2));
    }
}

std::vector<std::complex<double>> spectrum(const FourierLineCoefficients& lines,
                                           std::span<const double> f)
{
    const double root_t = std::sqrt(lines.T);
    std::vector<std::complex<double>> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::complex<double> acc = 0.0;
        for (int l = -lines.L; l <= lines.L; ++l)
            acc += lines.c[l + lines.L] * sinc(kPi * lines.T * (f[i] - l / lines.T));
        out[i] = root_t * acc;
    }
    return out;
}

std::complex<double> ambiguity_closed(const FourierLineCoefficients& lines,
                                      double tau, double nu)
{
    if (!std::isfinite(tau) || !std::isfinite(nu))
        throw std::invalid_argument("ambiguity_closed: non-finite evaluation point");
    if (std::fabs(tau) >= lines.T) return 0.0;
    return ambiguity_from_slices(delay_slices(lines, tau), lines.L, lines.T,
                                 tau, nu);
}

std::complex<double> acf(const FourierLineCoefficients& lines, double tau)
{
    return ambiguity_closed(lines, tau, 0.0);
}

std::complex<double> ambiguity_numeric(const SampledWaveform& wf,
                                       double tau, double nu)
{
    if (!std::isfinite(tau) || !std::isfinite(nu))
        throw std::invalid_argument("ambiguity_numeric: non-finite evaluation point");

    const auto n = static_cast<long long>(wf.size());
    if (n < 2) throw std::invalid_argument("ambiguity_numeric: empty waveform");

    const double dt = wf.dt();
    const long long k = std::llround(tau / (2.0 * dt));
    const long long a = std::llabs(k);
    if (2 * a >= n) return 0.0;

    // Periodic closure: index n refers back to sample 0 (phi is T-periodic).
    auto sample = [&](long long idx) { return wf.samples[idx == n ? 0 : idx]; };

    const std::complex<double> step = std::polar(1.0, kTwoPi * nu * dt);
    std::complex<double> doppler = std::polar(1.0, kTwoPi * nu * wf.time_at(a));

    long double are = 0.0L, aim = 0.0L;
    for (long long i = a; i <= n - a; ++i) {
        if ((i - a) % 256 == 0)
            doppler = std::polar(1.0, kTwoPi * nu * wf.time_at(i));
        const double w = (i == a || i == n - a) ? 0.5 : 1.0;
        const std::complex<double> p =
            sample(i - k) * std::conj(sample(i + k)) * doppler * w;
        are += p.real();
        aim += p.imag();
        doppler *= step;
    }
    return std::complex<double>(static_cast<double>(are),
                                static_cast<double>(aim)) * dt;
}

AmbiguitySurface ambiguity_surface(const FourierLineCoefficients& lines,
                                   std::span<const double> tau_axis,
                                   std::span<const double> nu_axis)
{
    AmbiguitySurface surf;
    surf.tau_axis.assign(tau_axis.begin(), tau_axis.end());
    surf.nu_axis.assign(nu_axis.begin(), nu_axis.end());
    surf.magnitude.resize(tau_axis.size() * nu_axis.size(), 0.0);

    for (std::size_t i = 0; i < tau_axis.size(); ++i) {
        const double tau = tau_axis[i];
        if (std::fabs(tau) >= lines.T) continue;
        const auto slices = delay_slices(lines, tau);
        for (std::size_t j = 0; j < nu_axis.size(); ++j)
            surf.magnitude[i * nu_axis.size() + j] = std::abs(
                ambiguity_from_slices(slices, lines.L, lines.T, tau, nu_axis[j]));
    }
    return surf;
}

Spectrogram spectrogram(const SampledWaveform& wf, int window_len, int hop)
{
    const auto n = static_cast<int>(wf.size());
    if (window_len < 2 || window_len > n)
        throw std::invalid_argument("spectrogram: window length out of range");
    if (hop < 1) throw std::invalid_argument("spectrogram: hop must be positive");

    std::vector<double> window(window_len);
    for (int i = 0; i < window_len; ++i)
        window[i] = 0.5 * (1.0 - std::cos(kTwoPi * i / (window_len - 1)));

    Spectrogram sg;
    sg.bin_count = static_cast<std::size_t>(window_len);
    const int half = window_len / 2;
    sg.freq_axis.resize(window_len);
    for (int b = 0; b < window_len; ++b)
        sg.freq_axis[b] = (b - half) * wf.sample_rate / window_len;

    std::vector<std::complex<double>> frame(window_len);
    for (int start = 0; start + window_len <= n; start += hop) {
        for (int i = 0; i < window_len; ++i)
            frame[i] = wf.samples[start + i] * window[i];
        const auto bins = fft::forward(frame);
        for (int b = 0; b < window_len; ++b)
            sg.power.push_back(std::norm(bins[(b + window_len - half) % window_len]));
        sg.time_axis.push_back(wf.time_at(start) + 0.5 * (window_len - 1) * wf.dt());
        ++sg.frame_count;
    }
    return sg;
}

}  // namespace mtffm
