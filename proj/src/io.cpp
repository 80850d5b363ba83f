#include "mtffm/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mtffm {
namespace {

std::string trim(std::string_view s)
{
    const auto from = s.find_first_not_of(" \t\r\n");
    if (from == std::string_view::npos) return {};
    const auto to = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(from, to - from + 1));
}

double parse_double(const std::string& key, const std::string& text)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' has malformed value '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v))
        throw ConfigError("key '" + key + "' has malformed value '" + text + "'");
    return v;
}

long long parse_integer(const std::string& key, const std::string& text)
{
    const double v = parse_double(key, text);
    if (v != std::floor(v) || std::fabs(v) > 9e15)
        throw ConfigError("key '" + key + "' must be an integer");
    return static_cast<long long>(v);
}

std::vector<double> parse_vector(const std::string& key, const std::string& text)
{
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    std::vector<double> out;
    std::string token;
    while (in >> token) out.push_back(parse_double(key, token));
    if (out.empty())
        throw ConfigError("key '" + key + "' holds no values");
    return out;
}

void apply_key(DesignConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "T") cfg.T = parse_double(key, value);
    else if (key == "delta_f") cfg.delta_f = parse_double(key, value);
    else if (key == "K") cfg.K = static_cast<int>(parse_integer(key, value));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    else if (key == "margin") cfg.margin = parse_double(key, value);
    else if (key == "z") cfg.z = parse_vector(key, value);
    else if (key == "delta") cfg.delta = parse_double(key, value);
    else if (key == "max_evals") cfg.max_evals = static_cast<int>(parse_integer(key, value));
    else if (key == "penalty_weight") cfg.penalty_weight = parse_double(key, value);
    else if (key == "step_init") cfg.step_init = parse_double(key, value);
    else if (key == "step_tol") cfg.step_tol = parse_double(key, value);
    else if (key == "kapteyn_tol") cfg.kapteyn_tol = parse_double(key, value);
    else if (key == "kapteyn_cap") cfg.kapteyn_cap = static_cast<int>(parse_integer(key, value));
    else if (key == "acf_oversample") cfg.acf_oversample = parse_double(key, value);
    else if (key == "sample_rate") cfg.sample_rate = parse_double(key, value);
    else if (key == "energy_tol") cfg.energy_tol = parse_double(key, value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "af_tau_points") cfg.af_tau_points = static_cast<int>(parse_integer(key, value));
    else if (key == "af_nu_points") cfg.af_nu_points = static_cast<int>(parse_integer(key, value));
    else if (key == "af_nu_max") cfg.af_nu_max = parse_double(key, value);
    else if (key == "spectrum_points") cfg.spectrum_points = static_cast<int>(parse_integer(key, value));
    else if (key == "spectrogram_window") cfg.spectrogram_window = static_cast<int>(parse_integer(key, value));
    else if (key == "spectrogram_hop") cfg.spectrogram_hop = static_cast<int>(parse_integer(key, value));
    else throw ConfigError("unknown key '" + key + "'");
}

void validate(const DesignConfig& cfg)
{
    if (!(cfg.T > 0.0)) throw ConfigError("config: T must be positive");
    if (!(cfg.delta_f > 0.0)) throw ConfigError("config: delta_f is required and must be positive");
    if (cfg.z.empty()) {
        if (cfg.K < 1) throw ConfigError("config: K must be >= 1");
        if (!(cfg.margin > 0.0) || cfg.margin > 1.0)
            throw ConfigError("config: margin must lie in (0, 1]");
    }
    if (!(cfg.delta > 0.0) || !(cfg.delta < 1.0))
        throw ConfigError("config: delta must lie in (0, 1)");
    if (cfg.max_evals < 0) throw ConfigError("config: max_evals must be >= 0");
    if (cfg.sample_rate < 0.0) throw ConfigError("config: sample_rate must be >= 0");
    if (!(cfg.energy_tol > 0.0) || !(cfg.energy_tol < 1.0))
        throw ConfigError("config: energy_tol must lie in (0, 1)");
    if (cfg.af_tau_points < 1 || cfg.af_nu_points < 1)
        throw ConfigError("config: AF grid sizes must be >= 1");
    if (cfg.spectrum_points < 2) throw ConfigError("config: spectrum_points must be >= 2");
    if (cfg.spectrogram_window < 0 || cfg.spectrogram_hop < 0)
        throw ConfigError("config: spectrogram sizes must be >= 0");
    if (!(cfg.kapteyn_tol > 0.0)) throw ConfigError("config: kapteyn_tol must be positive");
    if (cfg.kapteyn_cap < 16) throw ConfigError("config: kapteyn_cap must be >= 16");
    if (!(cfg.acf_oversample >= 8.0))
        throw ConfigError("config: acf_oversample must be >= 8");
}

}  // namespace

DesignConfig parse_design_config(std::istream& in)
{
    DesignConfig cfg;
    std::string line;
    int lineno = 0;
    bool k_explicit = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not of the form key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " has an empty key or value");
        if (key == "K") k_explicit = true;
        try {
            apply_key(cfg, key, value);
        } catch (const ConfigError& err) {
            throw ConfigError("config: line " + std::to_string(lineno) + ": " +
                              err.what());
        }
    }
    if (!cfg.z.empty()) {
        // An explicit coefficient list pins the order; a stated K must agree.
        if (k_explicit && cfg.K != static_cast<int>(cfg.z.size()))
            throw ConfigError("config: K = " + std::to_string(cfg.K) +
                              " does not match the " +
                              std::to_string(cfg.z.size()) + " values in z");
        cfg.K = static_cast<int>(cfg.z.size());
    }
    validate(cfg);
    return cfg;
}

DesignConfig load_design_config(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw ConfigError("config: cannot open '" + file.string() + "'");
    return parse_design_config(in);
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& file)
{
    if (file.has_parent_path())
        std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out)
        throw std::runtime_error("csv: cannot open '" + file.string() + "' for writing");
    return out;
}

}  // namespace

void write_table_csv(const std::filesystem::path& file,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns)
{
    if (header.size() != columns.size())
        throw std::invalid_argument("write_table_csv: header/column count mismatch");
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows)
            throw std::invalid_argument("write_table_csv: ragged columns");

    auto out = open_for_write(file);
    for (std::size_t j = 0; j < header.size(); ++j)
        out << (j ? "," : "") << header[j];
    out << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j)
            out << (j ? "," : "") << format_double(columns[j][i]);
        out << '\n';
    }
}

void write_matrix_csv(const std::filesystem::path& file,
                      const std::string& corner_label,
                      const std::vector<double>& col_axis,
                      const std::vector<double>& row_axis,
                      const std::vector<double>& row_major_values)
{
    if (row_major_values.size() != col_axis.size() * row_axis.size())
        throw std::invalid_argument("write_matrix_csv: size mismatch");

    auto out = open_for_write(file);
    out << corner_label;
    for (double v : col_axis) out << ',' << format_double(v);
    out << '\n';
    for (std::size_t i = 0; i < row_axis.size(); ++i) {
        out << format_double(row_axis[i]);
        for (std::size_t j = 0; j < col_axis.size(); ++j)
            out << ',' << format_double(row_major_values[i * col_axis.size() + j]);
        out << '\n';
    }
}

void write_kv_csv(const std::filesystem::path& file,
                  const std::vector<std::pair<std::string, std::string>>& rows)
{
    auto out = open_for_write(file);
    out << "key,value\n";
    for (const auto& [key, value] : rows) out << key << ',' << value << '\n';
}

CsvTable read_table_csv(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw ConfigError("csv: cannot open '" + file.string() + "'");

    CsvTable table;
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("csv: '" + file.string() + "' is empty");

    std::istringstream head(line);
    std::string cell;
    while (std::getline(head, cell, ',')) table.header.push_back(trim(cell));
    table.columns.resize(table.header.size());

    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::istringstream row(line);
        std::size_t j = 0;
        while (std::getline(row, cell, ',')) {
            if (j >= table.columns.size())
                throw ConfigError("csv: row wider than header in '" + file.string() + "'");
            table.columns[j++].push_back(parse_double("csv cell", trim(cell)));
        }
        if (j != table.columns.size())
            throw ConfigError("csv: short row in '" + file.string() + "'");
    }
    return table;
}

std::map<std::string, std::string> read_kv_csv(const std::filesystem::path& file)
{
    std::ifstream in(file);
    if (!in) throw ConfigError("csv: cannot open '" + file.string() + "'");

    std::map<std::string, std::string> out;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError("csv: malformed key,value row in '" + file.string() + "'");
        out[trim(line.substr(0, comma))] = trim(line.substr(comma + 1));
    }
    return out;
}

}  // namespace mtffm
