#include "mtffm/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace mtffm {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Ascending series sum_n (-1)^n (x/2)^{m+2n} / (n! (m+n)!).  The terms grow
// to ~4e3 before cancelling near x = 12, which would cost ~8 of the 16
// decimal digits in double; accumulating in long double keeps the absolute
// error at the 1e-16 level over the whole branch.
double bessel_series(int m, double x)
{
    const long double half = 0.5L * static_cast<long double>(x);
    long double term = 1.0L;
    for (int k = 1; k <= m; ++k) term *= half / k;
    if (term == 0.0L) return 0.0;  // (x/2)^m/m! underflowed; J_m is smaller still

    const long double q = half * half;
    long double sum = term;
    for (int n = 1; n < 1000; ++n) {
        term *= -q / (static_cast<long double>(n) * (n + m));
        sum += term;
        if (std::fabs(term) < 1e-24L * (std::fabs(sum) + 1e-30L)) break;
    }
    return static_cast<double>(sum);
}

// Miller's algorithm: run the three-term recurrence downward from an index
// comfortably above max(m, x), then normalize with
// J_0(x) + 2 J_2(x) + 2 J_4(x) + ... = 1.
double bessel_miller(int m, double x)
{
    const int base = std::max(m, static_cast<int>(std::ceil(x)));
    const int top = base + 1 +
        static_cast<int>(std::ceil(std::sqrt(40.0 * (base + 1))));

    long double jnext = 0.0L;   // trial J_{k+1}
    long double jcur = 1e-30L;  // trial J_k, k = top
    long double norm = 0.0L;
    long double result = (m == top) ? jcur : 0.0L;
    if (top % 2 == 0) norm += 2.0L * jcur;

    for (int k = top; k >= 1; --k) {
        const long double jprev = (2.0L * k / x) * jcur - jnext;
        jnext = jcur;
        jcur = jprev;
        const int idx = k - 1;
        if (idx == 0)
            norm += jcur;
        else if (idx % 2 == 0)
            norm += 2.0L * jcur;
        if (idx == m) result = jcur;
        if (std::fabs(jcur) > 1e250L) {
            jnext *= 1e-250L;
            jcur *= 1e-250L;
            norm *= 1e-250L;
            result *= 1e-250L;
        }
    }
    return static_cast<double>(result / norm);
}

double trapezoid_gbf(int m, std::span<const double> z, int n)
{
    const int K = static_cast<int>(z.size());
    long double acc = 0.0L;
    for (int i = 0; i < n; ++i) {
        const double theta = kTwoPi * i / n;
        double arg = m * theta;
        for (int k = 0; k < K; ++k)
            arg -= z[k] * std::sin((k + 1) * theta);
        acc += std::cos(arg);
    }
    return static_cast<double>(acc / n);
}

void validate_gbf_argument(std::span<const double> z)
{
    if (z.empty())
        throw std::invalid_argument("gbf: argument vector must be non-empty");
    for (double v : z)
        if (!std::isfinite(v))
            throw std::invalid_argument("gbf: non-finite argument entry");
}

}  // namespace

double bessel_j(int m, double x)
{
    if (m < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
    if (!std::isfinite(x)) throw std::invalid_argument("bessel_j: non-finite argument");

    const double ax = std::fabs(x);
    const double sign = (x < 0.0 && (m & 1)) ? -1.0 : 1.0;
    if (ax == 0.0) return m == 0 ? 1.0 : 0.0;
    const double value = (ax <= 12.0) ? bessel_series(m, ax) : bessel_miller(m, ax);
    return sign * value;
}

GbfArgument::GbfArgument(std::vector<double> values) : z(std::move(values))
{
    validate_gbf_argument(z);
}

double GbfArgument::weighted_sum() const
{
    double s = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k)
        s += (k + 1) * std::fabs(z[k]);
    return s;
}

double gbf(int m, const GbfArgument& arg)
{
    return gbf(m, std::span<const double>(arg.z));
}

double gbf(int m, std::span<const double> z)
{
    validate_gbf_argument(z);

    const int K = static_cast<int>(z.size());
    double wsum = 0.0;
    for (int k = 0; k < K; ++k) wsum += (k + 1) * std::fabs(z[k]);

    const int am = std::abs(m);
    const long long wanted = 8LL * (am + K * static_cast<long long>(std::ceil(wsum * am)));
    int n = static_cast<int>(std::max<long long>(256, wanted));

    double prev = trapezoid_gbf(m, z, n);
    for (int round = 0; round < 16; ++round) {
        n *= 2;
        const double cur = trapezoid_gbf(m, z, n);
        if (std::fabs(cur - prev) < 1e-13) return cur;
        prev = cur;
    }
    return prev;  // smooth periodic integrand: never reached in practice
}

std::vector<std::complex<double>> fourier_line_coefficients(
    std::span<const double> phase, int max_order)
{
    const int n = static_cast<int>(phase.size());
    if (max_order < 0)
        throw std::invalid_argument("fourier_line_coefficients: max_order must be >= 0");
    if (n < 4 * max_order + 4)
        throw std::invalid_argument(
            "fourier_line_coefficients: need at least 4*max_order + 4 samples");
    for (double p : phase)
        if (!std::isfinite(p))
            throw std::invalid_argument("fourier_line_coefficients: non-finite phase");

    const int L = max_order;
    std::vector<std::complex<double>> u(n);   // exp(j phi_i)
    std::vector<std::complex<double>> rot(n); // one-line advance exp(-j 2pi frac_i)
    std::vector<double> frac(n);
    for (int i = 0; i < n; ++i) {
        frac[i] = static_cast<double>(i) / n - 0.5;
        u[i] = std::polar(1.0, phase[i]);
        rot[i] = std::polar(1.0, -kTwoPi * frac[i]);
    }

    // March l from -L to +L, multiplying by rot each step.  The recurrence
    // drifts by ~eps per step, so the running product is refreshed from
    // direct trig every 64 lines.
    std::vector<std::complex<double>> cur(n);
    std::vector<std::complex<double>> out(2 * L + 1);
    for (int l = -L, idx = 0; l <= L; ++l, ++idx) {
        if (idx % 64 == 0) {
            for (int i = 0; i < n; ++i)
                cur[i] = u[i] * std::polar(1.0, -kTwoPi * frac[i] * l);
        }
        long double re = 0.0L, im = 0.0L;
        for (int i = 0; i < n; ++i) {
            re += cur[i].real();
            im += cur[i].imag();
        }
        out[idx] = {static_cast<double>(re / n), static_cast<double>(im / n)};
        if (l < L)
            for (int i = 0; i < n; ++i) cur[i] *= rot[i];
    }
    return out;
}

}  // namespace mtffm
