#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtffm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key-value run description.  Unknown keys are rejected so config
/// typos fail loudly instead of silently running defaults.
struct DesignConfig {
    double T = 1.0;          ///< pulse length, s
    double delta_f = 0.0;    ///< swept bandwidth, Hz (required)
    int K = 8;               ///< number of design coefficients
    std::uint64_t seed = 1;  ///< RNG seed for the initial draw
    double margin = 0.95;    ///< initial sum_k k|z_k|
    std::vector<double> z;   ///< optional explicit start, overrides K/seed/margin

    double delta = 0.1;      ///< RMS-bandwidth band half-width
    int max_evals = 4000;    ///< optimizer budget; 0 = evaluate only, no search
    double penalty_weight = 100.0;
    double step_init = 0.1;
    double step_tol = 1e-6;
    double kapteyn_tol = 1e-10;   ///< search-pipeline expansion tolerance
    int kapteyn_cap = 2048;
    double acf_oversample = 64.0;

    double sample_rate = 0.0;  ///< Hz; 0 selects 16 * delta_f
    double energy_tol = 1e-10; ///< Fourier-line truncation tolerance
    std::string output_dir = "mtffm_out";

    int af_tau_points = 65;
    int af_nu_points = 65;
    double af_nu_max = 0.0;    ///< Hz; 0 selects 10/T
    int spectrum_points = 1025;
    int spectrogram_window = 0;  ///< samples; 0 = N/16 rounded to even
    int spectrogram_hop = 0;     ///< samples; 0 = window/4
};

/// Parses the `key = value` format (one pair per line, '#' comments, blank
/// lines ignored; the z vector is comma- or space-separated).  Throws
/// ConfigError on unknown keys, malformed numbers, or invalid combinations
/// (delta_f missing, K < 1, ...).
DesignConfig parse_design_config(std::istream& in);
DesignConfig load_design_config(const std::filesystem::path& file);

/// %.17g formatting: doubles survive a write/parse round trip exactly.
std::string format_double(double v);

/// Column-oriented CSV with a one-line header.  All columns must share one
/// length.
void write_table_csv(const std::filesystem::path& file,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

/// Matrix CSV with a leading axis row and column: first cell is a label,
/// remainder of row 0 is `col_axis`, and each data row starts with its
/// row-axis value.
void write_matrix_csv(const std::filesystem::path& file,
                      const std::string& corner_label,
                      const std::vector<double>& col_axis,
                      const std::vector<double>& row_axis,
                      const std::vector<double>& row_major_values);

/// Two-column key,value document (summary records).
void write_kv_csv(const std::filesystem::path& file,
                  const std::vector<std::pair<std::string, std::string>>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

/// Reads a table written by write_table_csv.  Throws ConfigError on
/// malformed content.
CsvTable read_table_csv(const std::filesystem::path& file);

std::map<std::string, std::string> read_kv_csv(const std::filesystem::path& file);

}  // namespace mtffm
