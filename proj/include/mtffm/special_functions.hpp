#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mtffm {

/// Bessel function of the first kind J_m(x) for integer order m >= 0.
///
/// Uses the ascending power series (evaluated in extended precision) for
/// |x| <= 12 and Miller's backward recurrence with the even-order sum
/// normalization above that.  Absolute error stays below 1e-12 for
/// |x| <= 100 and degrades only slowly beyond.
///
/// Throws std::invalid_argument for m < 0 or non-finite x.
double bessel_j(int m, double x);

/// Argument vector of a K-variable generalized Bessel function.  Entry
/// z[k-1] multiplies sin(k*theta) in the integrand, k = 1..K.
struct GbfArgument {
    std::vector<double> z;

    explicit GbfArgument(std::vector<double> values);

    int order_count() const { return static_cast<int>(z.size()); }

    /// sum_k k*|z_k| -- the quantity that controls both Kapteyn-series
    /// convergence and the monotonicity of theta - sum_k z_k sin(k theta).
    double weighted_sum() const;
};

/// K-variable generalized Bessel function of the first kind,
///
///   J_m{z_1..z_K} = (1/2pi) Int_0^{2pi} cos(m theta - sum_k z_k sin(k theta)) dtheta.
///
/// Evaluated with the periodic trapezoid rule, which is spectrally accurate
/// here: the grid starts at max(256, 8*(|m| + K*ceil(weighted_sum * |m|)))
/// points and doubles until two successive estimates agree to 1e-13.
///
/// Reduces to bessel_j(m, z_1) for K = 1.  Throws std::invalid_argument for
/// an empty or non-finite argument vector.
double gbf(int m, const GbfArgument& arg);
double gbf(int m, std::span<const double> z);

/// Fourier line coefficients of a unit-modulus signal exp(j phi(t)) sampled
/// uniformly over one period:  phase[i] = phi(t_i) with
/// t_i = (i/N - 1/2) * T, i = 0..N-1.  Returns c_{-L}..c_{+L} (2L+1 values,
/// index l+L) where
///
///   c_l = (1/N) sum_i exp(j phase[i]) exp(-j 2 pi l (i/N - 1/2))
///
/// so that exp(j phi(t)) ~ sum_l c_l exp(+j 2 pi l t / T) and the spectral
/// line l sits at frequency +l/T.
///
/// Requires N >= 4L + 4 so every retained line is oversampled; throws
/// std::invalid_argument otherwise.
std::vector<std::complex<double>> fourier_line_coefficients(
    std::span<const double> phase, int max_order);

}  // namespace mtffm
