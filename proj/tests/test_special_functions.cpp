#include <doctest.h>

#include "mtffm/special_functions.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace mtffm;

namespace {

// Reference values computed independently with 40-digit arithmetic
// (mpmath besselj / direct quadrature of the defining integral) and frozen.
struct BesselCase {
    int m;
    double x;
    double expected;
};

constexpr BesselCase kBesselCases[] = {
    {0, 0.5, 0.93846980724081290423},
    {1, 1.0, 0.44005058574493351596},
    {2, 0.4, 0.019734663117030272352},
    {5, 3.7, 0.09948541700833390963},
    {0, 11.9, 0.02504944169958964508},     // near the series/Miller split
    {2, 12.000001, -0.084930704170576653387},
    {7, 12.0, -0.1702538041272080471},
    {3, 25.0, 0.10834308106150889528},
    {10, 80.0, 0.024043850978184763441},
    {0, 99.5, -0.019543066407440783557},
    {30, 5.0, 2.6711772782507988106e-21},  // far tail: order >> argument
    {40, 35.0, 0.014965632617051043521},
    {1, 100.0, -0.077145352014112158033},
    {130, 117.0, 0.00089726154003371561255},
};

}  // namespace

TEST_CASE("bessel_j matches frozen high-precision references")
{
    for (const auto& c : kBesselCases) {
        CAPTURE(c.m);
        CAPTURE(c.x);
        CHECK(std::fabs(bessel_j(c.m, c.x) - c.expected) < 1e-12);
    }
}

TEST_CASE("bessel_j special values and symmetry")
{
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(3, 0.0) == 0.0);
    // J_m(-x) = (-1)^m J_m(x)
    for (double x : {0.3, 4.2, 17.5}) {
        CHECK(bessel_j(2, -x) == doctest::Approx(bessel_j(2, x)).epsilon(1e-15));
        CHECK(bessel_j(3, -x) == doctest::Approx(-bessel_j(3, x)).epsilon(1e-15));
    }
}

TEST_CASE("bessel_j recurrence consistency across the branch split")
{
    // J_{m-1}(x) + J_{m+1}(x) = (2m/x) J_m(x), spanning the series/Miller
    // boundary at x = 12 and a spread of orders.
    for (double x : {0.7, 5.0, 11.5, 12.5, 40.0, 99.0}) {
        for (int m : {1, 2, 5, 11, 23}) {
            const double lhs = bessel_j(m - 1, x) + bessel_j(m + 1, x);
            const double rhs = 2.0 * m / x * bessel_j(m, x);
            CHECK(std::fabs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("bessel_j rejects bad input")
{
    CHECK_THROWS_AS(bessel_j(-1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(2, std::nan("")), std::invalid_argument);
}

TEST_CASE("gbf reduces to bessel_j for K = 1")
{
    for (double z : {0.05, 0.3, 0.72, 0.99}) {
        for (int m : {0, 1, 2, 5, 9}) {
            CAPTURE(z);
            CAPTURE(m);
            CHECK(std::fabs(gbf(m, std::vector{z}) - bessel_j(m, z)) < 1e-12);
        }
    }
}

TEST_CASE("gbf matches frozen references and the Graf convolution")
{
    // Frozen quadrature references (40-digit), cross-checked against the
    // convolution J_m{y1,y2} = sum_n J_{m-2n}(y1) J_n(y2).
    CHECK(std::fabs(gbf(2, std::vector{0.3, 0.1}) -
                    0.059971098394689898704) < 1e-12);
    CHECK(std::fabs(gbf(0, std::vector{0.25, 0.15, 0.05}) -
                    0.97829589566590965382) < 1e-12);
    CHECK(std::fabs(gbf(3, std::vector{0.25, 0.15, 0.05}) -
                    0.033709874363995410603) < 1e-12);

    // Independent convolution route for a fresh 2-variable case.
    const double y1 = 0.45, y2 = 0.2;
    for (int m : {0, 1, 4}) {
        double conv = 0.0;
        for (int nn = -12; nn <= 12; ++nn) {
            const int order = m - 2 * nn;
            const double j1 = bessel_j(std::abs(order), y1) *
                              ((order < 0 && (order & 1)) ? -1.0 : 1.0);
            const double j2 = bessel_j(std::abs(nn), y2) *
                              ((nn < 0 && (nn & 1)) ? -1.0 : 1.0);
            conv += j1 * j2;
        }
        CHECK(std::fabs(gbf(m, std::vector{y1, y2}) - conv) < 1e-12);
    }
}

TEST_CASE("gbf negative order parity")
{
    // J_{-m}{z} = (-1)^m J_m{z} holds when only odd harmonics are present;
    // check via theta -> -theta symmetry for K = 1.
    const std::vector<double> z{0.4};
    CHECK(std::fabs(gbf(-3, z) + gbf(3, z)) < 1e-13);
    CHECK(std::fabs(gbf(-2, z) - gbf(2, z)) < 1e-13);
}

TEST_CASE("gbf rejects bad input")
{
    CHECK_THROWS_AS(gbf(0, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(gbf(0, std::vector{0.1, std::nan("")}), std::invalid_argument);
}

TEST_CASE("GbfArgument weighted sum")
{
    const GbfArgument arg({0.5, -0.1, 0.02});
    CHECK(arg.order_count() == 3);
    CHECK(arg.weighted_sum() == doctest::Approx(0.5 + 0.2 + 0.06).epsilon(1e-15));
}

TEST_CASE("fourier_line_coefficients recovers a known line mix")
{
    // phi(t) chosen so exp(j phi) is NOT a pure line; instead place two
    // exact lines by summing them and extracting the phase -- simpler:
    // a pure tone exp(j 2 pi q t / T) has c_q = 1, everything else 0.
    const int n = 256;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int q : {-3, 0, 5}) {
        std::vector<double> phase(n);
        for (int i = 0; i < n; ++i)
            phase[i] = two_pi * q * (static_cast<double>(i) / n - 0.5);
        const auto c = fourier_line_coefficients(phase, 8);
        for (int l = -8; l <= 8; ++l) {
            const std::complex<double> want = (l == q) ? 1.0 : 0.0;
            CHECK(std::abs(c[l + 8] - want) < 1e-13);
        }
    }
}

TEST_CASE("fourier_line_coefficients matches Jacobi-Anger for sinusoidal phase")
{
    // exp(j beta sin(2 pi t / T)) = sum_l J_l(beta) exp(+j 2 pi l t / T):
    // the projection convention must reproduce signed Bessel coefficients.
    const int n = 2048;
    const double beta = 2.31;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> phase(n);
    for (int i = 0; i < n; ++i)
        phase[i] = beta * std::sin(two_pi * (static_cast<double>(i) / n - 0.5));
    const int L = 24;
    const auto c = fourier_line_coefficients(phase, L);
    for (int l = -L; l <= L; ++l) {
        const double jl = bessel_j(std::abs(l), beta) *
                          ((l < 0 && (l & 1)) ? -1.0 : 1.0);
        CHECK(std::abs(c[l + L] - jl) < 1e-12);
    }
}

TEST_CASE("fourier_line_coefficients enforces the sampling precondition")
{
    const std::vector<double> phase(32, 0.0);
    CHECK_NOTHROW(fourier_line_coefficients(phase, 7));   // 4*7+4 = 32
    CHECK_THROWS_AS(fourier_line_coefficients(phase, 8), std::invalid_argument);
    CHECK_THROWS_AS(fourier_line_coefficients(phase, -1), std::invalid_argument);
}

TEST_CASE("fourier_line_coefficients Parseval for unit-modulus input")
{
    // Random-ish smooth phase: discrete Parseval says the total line energy
    // over any N consecutive orders is exactly 1; the retained 2L+1 of them
    // must not exceed it.
    const int n = 512;
    std::vector<double> phase(n);
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / n;
        phase[i] = 1.7 * std::sin(2.0 * std::numbers::pi * x) +
                   0.9 * std::cos(6.0 * std::numbers::pi * x);
    }
    const auto c = fourier_line_coefficients(phase, 64);
    double energy = 0.0;
    for (const auto& v : c) energy += std::norm(v);
    CHECK(energy <= 1.0 + 1e-12);
    CHECK(energy > 0.999);  // this phase is well inside |l| <= 64
}
