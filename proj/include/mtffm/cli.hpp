#pragma once

#include <filesystem>
#include <optional>

#include "mtffm/io.hpp"

namespace mtffm::cli {

/// Directory all artifacts go to: the MTFFM_OUTPUT_DIR environment variable
/// when set (and non-empty), otherwise config.output_dir.  Created on use.
std::filesystem::path resolve_output_dir(const DesignConfig& config);

/// `design <config>`: optimize (or just evaluate when max_evals = 0) and
/// write coefficients/trace/ACF/spectrum/AF/spectrogram/waveform CSVs plus a
/// key-value run summary.
int run_design(const DesignConfig& config);

/// `verify [config]`: the identity suite -- Nielsen sum, Kapteyn norm
/// identity, Kepler inversion vs. series, closed-form vs. numeric ambiguity,
/// three-route RMS bandwidth.  Prints one line per check with the measured
/// error; returns 0 iff everything passes.  `inject_fault` corrupts one
/// Kapteyn coefficient to prove the harness can fail.
int run_verify(const std::optional<DesignConfig>& config, bool inject_fault);

/// `af-surface <config>`: |chi| matrix on a delay/Doppler grid with axis
/// headers.  Grid arguments <= 0 fall back to the config values.
int run_af_surface(const DesignConfig& config, int tau_points, int nu_points,
                   double nu_max,
                   const std::optional<std::filesystem::path>& coefficients);

/// `export-waveform <config>`: sampled waveform + Fourier line table.
int run_export_waveform(const DesignConfig& config,
                        const std::optional<std::filesystem::path>& coefficients);

/// argv front end.  Exit codes: 0 success, 2 configuration/usage error,
/// 3 numerical failure (including failed verify checks).
int dispatch(int argc, const char* const* argv);

}  // namespace mtffm::cli
