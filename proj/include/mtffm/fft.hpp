#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mtffm::fft {

/// Forward DFT, X[k] = sum_i x[i] exp(-j 2 pi i k / N).  Plans are cached
/// per transform length, so repeated calls at the same size are cheap.
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x);

/// Inverse DFT including the 1/N normalization, so inverse(forward(x)) == x
/// up to roundoff.
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x);

}  // namespace mtffm::fft
