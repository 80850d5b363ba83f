#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mtffm/kapteyn.hpp"

namespace mtffm {

/// Complex baseband samples of one pulse.  The grid is t_i = -T/2 + i/fs,
/// i = 0..N-1, with fs snapped so that N = fs*T exactly; this tiles the
/// period and makes the sampled energy sum(|s_i|^2)/fs equal 1 to roundoff.
struct SampledWaveform {
    std::vector<std::complex<double>> samples;
    double sample_rate = 0.0;  ///< effective (snapped) rate, Hz
    double T = 0.0;            ///< pulse length, seconds

    std::size_t size() const { return samples.size(); }
    double dt() const { return 1.0 / sample_rate; }
    double time_at(std::size_t i) const { return -0.5 * T + i / sample_rate; }
};

inline constexpr double kMinOversampling = 8.0;

/// s_i = (1/sqrt(T)) exp(j phi(t_i)) on the uniform grid over [-T/2, T/2).
/// Requires sample_rate >= 8 * delta_f; throws std::invalid_argument below
/// that.  The requested rate is snapped to round(sample_rate*T)/T.
SampledWaveform synthesize(const WaveformParams& params, double sample_rate);

/// Line spectrum of the T-periodic complex envelope: coefficients c_l for
/// l = -L..L with exp(j phi(t)) = sum_l c_l exp(+j 2 pi l t / T), so line l
/// carries frequency l/T Hz.
struct FourierLineCoefficients {
    std::vector<std::complex<double>> c;  ///< index l + L
    int L = 0;
    double T = 0.0;

    std::complex<double> line(int l) const
    {
        return (l < -L || l > L) ? std::complex<double>{} : c[l + L];
    }
    /// 1 - sum_l |c_l|^2: the line energy not captured by the truncation.
    double energy_deficit() const;
};

/// Expands exp(j phi(t)) into Fourier lines, growing the order L until the
/// captured energy sum |c_l|^2 reaches 1 - energy_tol (the envelope has unit
/// modulus, so total line energy is exactly 1).  L is capped at
/// 16*ceil(T*delta_f); the result is validated against a doubled sampling
/// grid so aliasing cannot masquerade as captured energy.
FourierLineCoefficients fourier_lines(const WaveformParams& params,
                                      double energy_tol = 1e-10);

/// Pulse spectrum from the line expansion:
///   S(f) = sqrt(T) sum_l c_l sinc(pi T (f - l/T)),  sinc(x) = sin(x)/x.
std::vector<std::complex<double>> spectrum(const FourierLineCoefficients& lines,
                                           std::span<const double> f);

/// Narrowband ambiguity function chi(tau, nu) of the unit-energy pulse in
/// closed form from the line expansion:
///
///   chi = ((T-|tau|)/T) sum_{l,l'} c_l conj(c_l') exp(-j pi (l+l') tau / T)
///                       sinc(pi (T-|tau|) (nu + (l-l')/T))
///
/// for |tau| <= T, and 0 beyond.  chi(0,0) = 1 for a unit-energy pulse.
std::complex<double> ambiguity_closed(const FourierLineCoefficients& lines,
                                      double tau, double nu);

/// Autocorrelation R(tau) = chi(tau, 0).
std::complex<double> acf(const FourierLineCoefficients& lines, double tau);

/// Direct quadrature of chi(tau, nu) = Int s(t - tau/2) conj(s(t + tau/2))
/// exp(j 2 pi nu t) dt from the samples.  tau is snapped to the nearest even
/// multiple of the sample period so both shifted copies stay on the grid;
/// the overlap integral uses trapezoid end weights with the right edge
/// closed by periodicity (s(T/2) = s(-T/2)).
std::complex<double> ambiguity_numeric(const SampledWaveform& wf,
                                       double tau, double nu);

/// |chi| on a delay/Doppler grid, row-major with delay as the row index.
struct AmbiguitySurface {
    std::vector<double> magnitude;
    std::vector<double> tau_axis;
    std::vector<double> nu_axis;

    double at(std::size_t i, std::size_t j) const
    {
        return magnitude[i * nu_axis.size() + j];
    }
};

AmbiguitySurface ambiguity_surface(const FourierLineCoefficients& lines,
                                   std::span<const double> tau_axis,
                                   std::span<const double> nu_axis);

/// Short-time power spectrum (Hann window), for inspecting the time-frequency
/// ridge of the design.  Frames advance by `hop` samples; bins are shifted so
/// frequency runs from -fs/2 upward.
struct Spectrogram {
    std::vector<double> power;  ///< frame-major, frames x bins
    std::size_t frame_count = 0;
    std::size_t bin_count = 0;
    std::vector<double> time_axis;  ///< frame centers, seconds
    std::vector<double> freq_axis;  ///< bin centers, Hz
};

Spectrogram spectrogram(const SampledWaveform& wf, int window_len, int hop);

}  // namespace mtffm
