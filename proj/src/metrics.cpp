#include "mtffm/metrics.hpp"

#include "mtffm/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mtffm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double simpson(const std::function<double(double)>& f, double a, double b, int n)
{
    // n intervals, n even.
    const double h = (b - a) / n;
    long double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return static_cast<double>(acc * h / 3.0L);
}

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double delta_f)
{
    if (b <= a) return 0.0;
    int n = std::max(16, static_cast<int>(std::ceil(64.0 * (b - a) * delta_f)));
    n += n % 2;
    double prev = simpson(f, a, b, n);
    for (int round = 0; round < 12; ++round) {
        n *= 2;
        const double cur = simpson(f, a, b, n);
        if (std::fabs(cur - prev) <= 1e-6 * std::fabs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace

double mainlobe_null(std::span<const double> power, double step)
{
    if (power.size() < 3)
        throw std::invalid_argument("mainlobe_null: need at least 3 samples");
    if (!(step > 0.0))
        throw std::invalid_argument("mainlobe_null: step must be positive");

    for (std::size_t i = 1; i + 1 < power.size(); ++i) {
        if (power[i] < power[i - 1] && power[i] < power[i + 1]) {
            // Parabolic vertex through the minimum and its neighbours.
            const double denom = power[i - 1] - 2.0 * power[i] + power[i + 1];
            double offset = 0.0;
            if (denom > 0.0)
                offset = 0.5 * (power[i - 1] - power[i + 1]) / denom;
            return (static_cast<double>(i) + std::clamp(offset, -0.5, 0.5)) * step;
        }
    }
    throw MetricUndefined(
        "mainlobe_null: |R|^2 has no interior local minimum on the grid");
}

IsrResult isr(const std::function<double(double)>& acf_power, double tau_m,
              double T, double delta_f)
{
    if (!(T > 0.0) || !(delta_f > 0.0))
        throw std::invalid_argument("isr: T and delta_f must be positive");
    if (!(tau_m > 0.0) || !(tau_m < T))
        throw std::invalid_argument("isr: tau_m must lie strictly inside (0, T)");

    IsrResult out;
    out.tau_m = tau_m;
    out.mainlobe_area = integrate_adaptive(acf_power, 0.0, tau_m, delta_f);
    out.sidelobe_area = integrate_adaptive(acf_power, tau_m, T, delta_f);
    if (!(out.mainlobe_area > 0.0))
        throw MetricUndefined("isr: mainlobe carries no energy");
    out.isr_db = 10.0 * std::log10(out.sidelobe_area / out.mainlobe_area);
    return out;
}

double AcfPowerGrid::operator()(double tau) const
{
    const auto n = static_cast<long long>(power.size());
    const double x = std::clamp(tau, 0.0, T) / step;
    const auto i = std::min(static_cast<long long>(x), n - 2);
    const double u = x - static_cast<double>(i);

    auto at = [&](long long j) { return power[std::clamp(j, 0LL, n - 1)]; };
    const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);

    const double v = p1 + 0.5 * u * (p2 - p0 +
        u * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
             u * (3.0 * (p1 - p2) + p3 - p0)));
    return std::max(v, 0.0);
}

AcfPowerGrid acf_power_grid(const SampledWaveform& wf)
{
    const auto n = static_cast<std::size_t>(wf.size());
    if (n < 4) throw std::invalid_argument("acf_power_grid: waveform too short");

    std::size_t padded = 1;
    while (padded < 2 * n + 1) padded *= 2;

    std::vector<std::complex<double>> buf(padded, 0.0);
    std::copy(wf.samples.begin(), wf.samples.end(), buf.begin());
    auto spec = fft::forward(buf);
    for (auto& v : spec) v = std::norm(v);
    const auto corr = fft::inverse(spec);  // corr[k] = sum_i s_{i+k} conj(s_i)

    // corr[k] is a flat (rectangle-rule) sum over the overlap; converting to
    // the trapezoid rule costs one half-weight swap at each end, with the
    // right end closed by periodicity (s(T/2) = s(-T/2)).
    const double dt = wf.dt();
    AcfPowerGrid grid;
    grid.step = dt;
    grid.T = wf.T;
    grid.power.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        std::complex<double> r = (k < n) ? corr[k] : 0.0;
        const std::complex<double> first = wf.samples[k % n] * std::conj(wf.samples[0]);
        const std::complex<double> last = wf.samples[0] * std::conj(wf.samples[(n - k) % n]);
        r += 0.5 * (last - first);
        grid.power[k] = std::norm(r * dt);
    }
    return grid;
}

IsrResult isr_of_waveform(const SampledWaveform& wf, double delta_f)
{
    const AcfPowerGrid grid = acf_power_grid(wf);
    const double tau_m = mainlobe_null(grid.power, grid.step);
    return isr(grid, tau_m, wf.T, delta_f);
}

double rms_bandwidth_spectral(const SampledWaveform& wf)
{
    const auto n = static_cast<long long>(wf.size());
    if (n < 4) throw std::invalid_argument("rms_bandwidth_spectral: waveform too short");

    auto spec = fft::forward(wf.samples);
    for (long long k = 0; k < n; ++k) {
        const long long signed_k = (2 * k < n) ? k : k - n;
        // The Nyquist bin has no well-defined sign; its derivative weight is 0.
        const double f = (2 * k == n) ? 0.0 : signed_k / wf.T;
        spec[k] *= std::complex<double>(0.0, kTwoPi * f);
    }
    const auto deriv = fft::inverse(spec);

    const double dt = wf.dt();
    long double e1 = 0.0L;
    std::complex<long double> m1 = 0.0L;
    for (long long i = 0; i < n; ++i) {
        e1 += std::norm(deriv[i]);
        m1 += std::complex<long double>(wf.samples[i] * std::conj(deriv[i]));
    }
    const double second = static_cast<double>(e1) * dt;
    const std::complex<double> first{static_cast<double>(m1.real() * dt),
                                     static_cast<double>(m1.imag() * dt)};
    const double beta_sq = second - std::norm(first);
    return std::sqrt(std::max(beta_sq, 0.0));
}

double rms_bandwidth_kapteyn(const KapteynExpansion& expansion, double A)
{
    if (!std::isfinite(A)) throw std::invalid_argument("rms_bandwidth_kapteyn: bad A");
    long double s = 0.0L;
    for (double b : expansion.b) s += static_cast<long double>(b) * b;
    return std::sqrt(2.0 * std::numbers::pi * std::numbers::pi * A * A *
                     static_cast<double>(s));
}

double rms_bandwidth_kapteyn(const DesignCoefficients& coeffs, double A,
                             double tol, int order_cap)
{
    return rms_bandwidth_kapteyn(kapteyn_coefficients(coeffs, tol, order_cap), A);
}

double rms_bandwidth_direct(const DesignCoefficients& coeffs, double A)
{
    if (!std::isfinite(A)) throw std::invalid_argument("rms_bandwidth_direct: bad A");
    long double s = 0.0L;
    for (double z : coeffs.z) s += static_cast<long double>(z) * z;
    return std::sqrt(2.0 * std::numbers::pi * std::numbers::pi * A * A *
                     static_cast<double>(s));
}

}  // namespace mtffm
