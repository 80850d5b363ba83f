#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mtffm/waveform.hpp"

namespace mtffm {

/// Raised when a metric has no defined value for the given waveform, e.g.
/// an autocorrelation with no interior null to delimit the mainlobe.
class MetricUndefined : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Delay of the first null of |R(tau)|^2: the first strict interior local
/// minimum to the right of tau = 0, refined by fitting a parabola through
/// the minimum sample and its two neighbours.  `power` holds |R|^2 on the
/// uniform grid tau = 0, step, 2*step, ...; the grid must resolve the
/// mainlobe (spacing <= 1/(8*delta_f) for a waveform sweeping delta_f).
///
/// Throws MetricUndefined when no interior minimum exists (e.g. an
/// unmodulated pulse, whose |R|^2 decays monotonically).
double mainlobe_null(std::span<const double> power, double step);

struct IsrResult {
    double isr_db = 0.0;         ///< 10 log10(sidelobe_area / mainlobe_area)
    double tau_m = 0.0;          ///< mainlobe/sidelobe boundary, seconds
    double mainlobe_area = 0.0;  ///< Int_0^tau_m |R|^2 dtau
    double sidelobe_area = 0.0;  ///< Int_tau_m^T |R|^2 dtau
};

/// Integrated sidelobe ratio of |R(tau)|^2 given the mainlobe null tau_m.
/// Both areas use composite Simpson quadrature starting at 64 points per
/// 1/delta_f of span, doubling until the value is stable to 1e-6 relative.
/// Requires 0 < tau_m < T.
IsrResult isr(const std::function<double(double)>& acf_power, double tau_m,
              double T, double delta_f);

/// |R(tau)|^2 sampled on the waveform's own delay grid (tau = k/fs,
/// k = 0..N), computed with one FFT-based autocorrelation plus trapezoid
/// end-weight corrections.  Evaluation between grid nodes uses Catmull-Rom
/// interpolation, clamped at zero since |R|^2 cannot be negative.
struct AcfPowerGrid {
    std::vector<double> power;
    double step = 0.0;
    double T = 0.0;

    double operator()(double tau) const;
};

AcfPowerGrid acf_power_grid(const SampledWaveform& wf);

/// Convenience pipeline: sampled |R|^2 -> first null -> ISR.
IsrResult isr_of_waveform(const SampledWaveform& wf, double delta_f);

/// RMS bandwidth in rad/s from the samples (spectral route):
///
///   beta^2 = Int |s'(t)|^2 dt - |Int s(t) conj(s'(t)) dt|^2
///
/// for a unit-energy pulse, with s' obtained by spectral differentiation of
/// the T-periodic sample sequence (the Nyquist bin is zeroed).  Equals
/// 2 pi sqrt(Int (f - <f>)^2 |S(f)|^2 df) by Parseval.
double rms_bandwidth_spectral(const SampledWaveform& wf);

/// RMS bandwidth in rad/s through the Kapteyn expansion:
///   beta^2 = 2 pi^2 A^2 sum_m b_m^2.
double rms_bandwidth_kapteyn(const KapteynExpansion& expansion, double A);
double rms_bandwidth_kapteyn(const DesignCoefficients& coeffs, double A,
                             double tol = kKapteynDefaultTol,
                             int order_cap = kKapteynOrderCap);

/// RMS bandwidth in rad/s directly from the design coefficients, using the
/// Kapteyn-series norm identity sum_m b_m^2 = sum_k z_k^2:
///   beta^2 = 2 pi^2 A^2 sum_k z_k^2.
double rms_bandwidth_direct(const DesignCoefficients& coeffs, double A);

}  // namespace mtffm
