#include "mtffm/kapteyn.hpp"

#include "mtffm/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace mtffm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kWeightedSumSlack = 1e-12;

void validate_coefficients(const std::vector<double>& z)
{
    if (z.empty())
        throw std::invalid_argument("DesignCoefficients: vector must be non-empty");
    double wsum = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        if (!std::isfinite(z[k]))
            throw std::invalid_argument("DesignCoefficients: non-finite entry");
        wsum += (k + 1) * std::fabs(z[k]);
    }
    if (wsum > 1.0 + kWeightedSumSlack)
        throw std::domain_error(
            "DesignCoefficients: sum_k k*|z_k| exceeds 1; the feedback phase "
            "equation loses invertibility and the Kapteyn series diverges");
}

// theta - sum_k z_k sin(k theta) sampled on a uniform grid of n points over
// [0, 2pi), together with cos/sin of it.  Shared by every expansion order.
struct KernelGrid {
    std::vector<double> f, cf, sf;

    void build(const std::vector<double>& z, int n)
    {
        f.resize(n);
        cf.resize(n);
        sf.resize(n);
        const int K = static_cast<int>(z.size());
        for (int i = 0; i < n; ++i) {
            const double theta = kTwoPi * i / n;
            double v = theta;
            for (int k = 0; k < K; ++k)
                v -= z[k] * std::sin((k + 1) * theta);
            f[i] = v;
            cf[i] = std::cos(v);
            sf[i] = std::sin(v);
        }
    }
};

int grid_size_for_order(int m)
{
    int n = 4096;
    const long long wanted = 8LL * (m + 1);
    while (n < wanted) n *= 2;
    return n;
}

double tail_estimate_capped(const std::vector<double>& b)
{
    // Geometric-ratio fit over the last five orders; near the convergence
    // boundary the decay turns algebraic (roughly m^{-4/3}) and the ratio
    // approaches 1, so fall back to the matching algebraic tail sum there.
    const int M = static_cast<int>(b.size());
    const double bm = std::fabs(b[M - 1]);
    if (bm == 0.0) {
        double mx = 0.0;
        for (int i = std::max(0, M - 5); i < M; ++i)
            mx = std::max(mx, std::fabs(b[i]));
        return mx;
    }
    if (M > 5 && std::fabs(b[M - 6]) > bm) {
        const double r = std::pow(bm / std::fabs(b[M - 6]), 0.2);
        if (r < 0.9995) return bm * r / (1.0 - r);
    }
    return 3.0 * bm * M;
}

}  // namespace

DesignCoefficients::DesignCoefficients(std::vector<double> values)
    : z(std::move(values))
{
    validate_coefficients(z);
}

double DesignCoefficients::weighted_sum() const
{
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k)
        s += (k + 1) * std::fabs(z[k]);
    return s;
}

KapteynExpansion kapteyn_coefficients(const DesignCoefficients& coeffs,
                                      double tol, int order_cap)
{
    if (!(tol > 0.0))
        throw std::invalid_argument("kapteyn_coefficients: tol must be positive");
    if (order_cap < 16)
        throw std::invalid_argument("kapteyn_coefficients: order_cap must be >= 16");

    const bool all_zero = std::all_of(coeffs.z.begin(), coeffs.z.end(),
                                      [](double v) { return v == 0.0; });
    if (all_zero) return {};

    // b_m = (2/m) * gbf(m, m*z), and scaling the GBF argument by m folds back
    // into the integrand: gbf(m, m*z) = (1/2pi) Int cos(m * f(theta)) dtheta
    // with f(theta) = theta - sum_k z_k sin(k theta).  So one sampled f
    // serves every order, advanced by the rotation
    // (cos(m f), sin(m f)) -> (cos((m+1) f), sin((m+1) f)), refreshed from
    // direct trig every 32 orders to hold roundoff near 1e-14.
    KernelGrid grid;
    int n = grid_size_for_order(1);
    grid.build(coeffs.z, n);

    std::vector<double> cm = grid.cf;  // cos(m * f), currently m = 1
    std::vector<double> sm = grid.sf;

    KapteynExpansion out;
    out.b.reserve(256);

    int since_resync = 0;
    for (int m = 1; m <= order_cap; ++m) {
        const int needed = grid_size_for_order(m);
        if (needed > n || (m > 1 && ++since_resync >= 32)) {
            if (needed > n) {
                n = needed;
                grid.build(coeffs.z, n);
                cm.resize(n);
                sm.resize(n);
            }
            for (int i = 0; i < n; ++i) {
                cm[i] = std::cos(m * grid.f[i]);
                sm[i] = std::sin(m * grid.f[i]);
            }
            since_resync = 0;
        } else if (m > 1) {
            for (int i = 0; i < n; ++i) {
                const double c = cm[i] * grid.cf[i] - sm[i] * grid.sf[i];
                const double s = sm[i] * grid.cf[i] + cm[i] * grid.sf[i];
                cm[i] = c;
                sm[i] = s;
            }
        }

        long double acc = 0.0L;
        for (int i = 0; i < n; ++i) acc += cm[i];
        const double jm = static_cast<double>(acc / n);
        out.b.push_back(2.0 * jm / m);

        if (m >= 5) {
            double recent = 0.0;
            for (int i = m - 5; i < m; ++i)
                recent = std::max(recent, std::fabs(out.b[i]));
            if (recent < tol) {
                out.tail_bound = recent;
                return out;
            }
        }
    }

    out.tail_bound = tail_estimate_capped(out.b);
    return out;
}

double invert_kepler(double psi, const DesignCoefficients& coeffs)
{
    if (!std::isfinite(psi))
        throw std::invalid_argument("invert_kepler: non-finite psi");

    const auto& z = coeffs.z;
    const int K = static_cast<int>(z.size());
    auto eval = [&](double th) {
        double v = th;
        for (int k = 0; k < K; ++k) v -= z[k] * std::sin((k + 1) * th);
        return v;
    };
    auto slope = [&](double th) {
        double v = 1.0;
        for (int k = 0; k < K; ++k) v -= (k + 1) * z[k] * std::cos((k + 1) * th);
        return v;
    };

    // theta(psi + 2 pi q) = theta(psi) + 2 pi q, so solve in one period.
    const double cycles = std::floor(psi / kTwoPi);
    const double target = psi - cycles * kTwoPi;

    // |theta - psi| = |sum z_k sin(k theta)| <= sum|z_k| <= 1 brackets the root.
    double lo = target - 1.0;
    double hi = target + 1.0;
    double th = target;
    double resid = eval(th) - target;

    for (int it = 0; it < 200 && std::fabs(resid) > 1e-14; ++it) {
        if (resid > 0.0)
            hi = th;
        else
            lo = th;
        const double d = slope(th);
        double next = (d > 1e-8) ? th - resid / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == th) break;
        th = next;
        resid = eval(th) - target;
    }

    if (std::fabs(resid) > 1e-13)
        throw std::runtime_error("invert_kepler: residual failed to converge");
    return th + cycles * kTwoPi;
}

WaveformParams make_waveform_params(double T, double delta_f,
                                    DesignCoefficients coeffs,
                                    double tol, int order_cap)
{
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("make_waveform_params: T must be positive");
    if (!(delta_f > 0.0) || !std::isfinite(delta_f))
        throw std::invalid_argument("make_waveform_params: delta_f must be positive");

    KapteynExpansion exp = kapteyn_coefficients(coeffs, tol, order_cap);

    // Peak of |g(psi)| = |sum_m b_m sin(m psi)| on a 4096-point period grid.
    double peak = 0.0;
    const int M = exp.order_count();
    if (M > 0) {
        constexpr int kGrid = 4096;
        for (int i = 0; i < kGrid; ++i) {
            const double psi = kTwoPi * i / kGrid;
            const double c1 = std::cos(psi), s1 = std::sin(psi);
            double cc = 1.0, ss = 0.0, g = 0.0;
            for (int m = 0; m < M; ++m) {
                const double c = cc * c1 - ss * s1;
                const double s = ss * c1 + cc * s1;
                cc = c;
                ss = s;
                g += exp.b[m] * ss;
            }
            peak = std::max(peak, std::fabs(g));
        }
    }

    WaveformParams params{T, delta_f,
                          peak > 0.0 ? (0.5 * delta_f) / peak : 0.5 * delta_f,
                          std::move(coeffs), std::move(exp)};
    return params;
}

namespace {

// sum_m w_m sin(m omega t) or sum_m w_m cos(m omega t) at each grid point,
// by the same rotation recurrence used for the coefficients (refreshed every
// 64 orders).
enum class Basis { Sine, Cosine };

std::vector<double> harmonic_sum(std::span<const double> w, double omega,
                                 std::span<const double> t, Basis basis)
{
    const int M = static_cast<int>(w.size());
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!std::isfinite(t[i]))
            throw std::invalid_argument("harmonic sum: non-finite time sample");
        const double base = omega * t[i];
        const double c1 = std::cos(base), s1 = std::sin(base);
        double cc = 1.0, ss = 0.0;
        long double acc = 0.0L;
        for (int m = 1; m <= M; ++m) {
            if (m % 64 == 1 && m > 1) {
                cc = std::cos(m * base);
                ss = std::sin(m * base);
            } else {
                const double c = cc * c1 - ss * s1;
                const double s = ss * c1 + cc * s1;
                cc = c;
                ss = s;
            }
            acc += w[m - 1] * (basis == Basis::Sine ? ss : cc);
        }
        out[i] = static_cast<double>(acc);
    }
    return out;
}

}  // namespace

std::vector<double> modulation_function(const WaveformParams& params,
                                        std::span<const double> t)
{
    std::vector<double> g = harmonic_sum(params.expansion.b, kTwoPi / params.T,
                                         t, Basis::Sine);
    for (auto& v : g) v *= params.A;
    return g;
}

std::vector<double> phase_function(const WaveformParams& params,
                                   std::span<const double> t)
{
    const int M = params.expansion.order_count();
    std::vector<double> alpha(M);
    double total = 0.0;
    for (int m = 1; m <= M; ++m) {
        alpha[m - 1] = -params.A * params.T * params.expansion.b[m - 1] / m;
        total += std::fabs(alpha[m - 1]);
    }

    // The 1/m factor makes the phase series converge faster than the
    // coefficient series; drop the tail once its l1 mass is below roundoff
    // relative to the full phase excursion.
    const double cutoff = 1e-13 * (1.0 + total);
    double tail = 0.0;
    int keep = M;
    while (keep > 1 && tail + std::fabs(alpha[keep - 1]) < cutoff) {
        tail += std::fabs(alpha[keep - 1]);
        --keep;
    }
    alpha.resize(keep);

    return harmonic_sum(alpha, kTwoPi / params.T, t, Basis::Cosine);
}

}  // namespace mtffm
