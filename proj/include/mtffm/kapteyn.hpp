#pragma once

#include <span>
#include <vector>

namespace mtffm {

/// Modulation indices z_1..z_K of the K harmonically related feedback
/// oscillators that shape the waveform.  The vector is valid when
/// sum_k k*|z_k| <= 1: inside that region the feedback phase equation has a
/// unique solution and the Kapteyn expansion of the modulation converges.
struct DesignCoefficients {
    std::vector<double> z;

    /// Validates the vector: throws std::invalid_argument when empty or
    /// non-finite, std::domain_error when sum_k k*|z_k| > 1 + 1e-12.
    explicit DesignCoefficients(std::vector<double> values);

    int harmonic_count() const { return static_cast<int>(z.size()); }

    /// sum_k k*|z_k|.
    double weighted_sum() const;
};

/// Truncated Fourier-sine expansion of the periodic modulation shape,
///
///   g(psi) = sum_{m=1}^{M} b_m sin(m psi),   b_m = (2/m) * gbf(m, m*z).
///
/// g(psi) equals theta(psi) - psi where theta solves the feedback phase
/// equation psi = theta - sum_k z_k sin(k theta).
struct KapteynExpansion {
    std::vector<double> b;  ///< b[m-1] holds b_m.

    /// Estimate of the neglected mass sum_{m>M} |b_m|.  When the series was
    /// truncated by the tolerance this is the max of the last five computed
    /// |b_m| (all below tol); when the order cap was hit first it is a
    /// geometric-ratio extrapolation of the remaining tail, so downstream
    /// tolerances scale honestly even for near-boundary coefficient sets.
    double tail_bound = 0.0;

    int order_count() const { return static_cast<int>(b.size()); }
};

inline constexpr double kKapteynDefaultTol = 1e-12;
inline constexpr int kKapteynOrderCap = 4096;

/// Expands g(psi) until the last five |b_m| all drop below tol or the order
/// cap is reached.  All orders share one quadrature grid: because the m-th
/// coefficient needs gbf(m, m*z) and the scaled argument re-sums into
/// m * (theta - sum_k z_k sin(k theta)), every b_m is a cosine average of
/// multiples of one fixed function, evaluated by a rotation recurrence with
/// periodic trig refresh.  The grid doubles whenever the current order's
/// bandwidth approaches it.
///
/// Throws std::invalid_argument for tol <= 0 or order_cap < 16.
KapteynExpansion kapteyn_coefficients(const DesignCoefficients& coeffs,
                                      double tol = kKapteynDefaultTol,
                                      int order_cap = kKapteynOrderCap);

/// Solves psi = theta - sum_k z_k sin(k theta) for theta.  Safeguarded
/// Newton iteration on a bracket of width 2 around psi, falling back to
/// bisection whenever the derivative drops below 1e-8 (the derivative can
/// touch zero when sum_k k|z_k| = 1, where Newton would be unstable).
/// The result satisfies |theta - sum_k z_k sin(k theta) - psi| <= 1e-13.
double invert_kepler(double psi, const DesignCoefficients& coeffs);

/// Physical description of one waveform: duration T, swept band
/// [-delta_f/2, +delta_f/2], and the amplitude A (Hz) applied to the
/// unit-coefficient modulation shape so the sweep fills the band exactly.
struct WaveformParams {
    double T = 0.0;        ///< pulse length, seconds
    double delta_f = 0.0;  ///< swept bandwidth, Hz
    double A = 0.0;        ///< modulation amplitude, Hz
    DesignCoefficients coeffs;
    KapteynExpansion expansion;

    double tbp() const { return T * delta_f; }
};

/// Expands the Kapteyn series for `coeffs` and normalizes the amplitude so
/// that max_t |m(t)| = delta_f/2, with the peak of |g| located on a
/// 4096-point grid over one period.  For the all-zero coefficient vector
/// (no modulation; |g| == 0) the amplitude defaults to delta_f/2.
///
/// Throws std::invalid_argument for T <= 0 or delta_f <= 0.
WaveformParams make_waveform_params(double T, double delta_f,
                                    DesignCoefficients coeffs,
                                    double tol = kKapteynDefaultTol,
                                    int order_cap = kKapteynOrderCap);

/// Instantaneous frequency modulation m(t) = A * g(2 pi t / T) in Hz.
std::vector<double> modulation_function(const WaveformParams& params,
                                        std::span<const double> t);

/// Phase phi(t) = 2 pi Int_0^t m(u) du = -sum_m (A T b_m / m) cos(2 pi m t / T),
/// radians.  The integration constant makes phi T-periodic with zero mean.
std::vector<double> phase_function(const WaveformParams& params,
                                   std::span<const double> t);

}  // namespace mtffm
