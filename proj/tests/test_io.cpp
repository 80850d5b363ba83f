#include <doctest.h>

#include "mtffm/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace mtffm;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir()
    {
        path_ = fs::temp_directory_path() /
                ("mtffm_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    fs::path file(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

DesignConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_design_config(in);
}

}  // namespace

TEST_CASE("design config parses keys, comments, and a coefficient list")
{
    const DesignConfig cfg = parse(
        "# demo design\n"
        "T = 0.5\n"
        "delta_f = 40  # Hz\n"
        "K = 3\n"
        "seed = 17\n"
        "z = 0.25, -0.1, 0.05\n"
        "\n"
        "max_evals = 250\n"
        "output_dir = out/demo\n");
    CHECK(cfg.T == 0.5);
    CHECK(cfg.delta_f == 40.0);
    CHECK(cfg.K == 3);
    CHECK(cfg.seed == 17);
    CHECK(cfg.z == std::vector<double>{0.25, -0.1, 0.05});
    CHECK(cfg.max_evals == 250);
    CHECK(cfg.output_dir == "out/demo");
    // Untouched keys keep their defaults.
    CHECK(cfg.delta == 0.1);
    CHECK(cfg.margin == 0.95);
}

TEST_CASE("design config rejects malformed input with a line number")
{
    CHECK_THROWS_AS(parse("delta_f = 10\nbogus_key = 1\n"), ConfigError);
    try {
        parse("delta_f = 10\nT = fast\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& err) {
        CHECK(std::string(err.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("delta_f = 10\nT\n"), ConfigError);
    CHECK_THROWS_AS(parse("delta_f = 10\nK = 2.5\n"), ConfigError);

    // Validation failures: missing delta_f, nonpositive T, K vs z mismatch.
    CHECK_THROWS_AS(parse("T = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("delta_f = 10\nT = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse("delta_f = 10\nK = 2\nz = 0.1, 0.2, 0.3\n"), ConfigError);
    CHECK_THROWS_AS(parse("delta_f = 10\ndelta = -0.5\n"), ConfigError);
}

TEST_CASE("explicit z without K infers the order")
{
    const DesignConfig cfg = parse("delta_f = 10\nz = 0.5, 0.1\n");
    CHECK(cfg.K == 2);
}

TEST_CASE("table CSV round-trips doubles exactly")
{
    TempDir dir;
    const auto path = dir.file("table.csv");
    const std::vector<double> x{0.1, -2.5e-300, 3.0, 1.0 / 3.0};
    const std::vector<double> y{1e17 + 1.0, 0.0, -7.25, 9.869604401089358};
    write_table_csv(path, {"x", "y"}, {x, y});

    const CsvTable table = read_table_csv(path);
    REQUIRE(table.header == std::vector<std::string>{"x", "y"});
    REQUIRE(table.columns.size() == 2);
    CHECK(table.columns[0] == x);  // %.17g is lossless for doubles
    CHECK(table.columns[1] == y);

    CHECK_THROWS_AS(write_table_csv(path, {"x", "y"}, {x}), std::invalid_argument);
}

TEST_CASE("matrix CSV stores axes in the header row and first column")
{
    TempDir dir;
    const auto path = dir.file("matrix.csv");
    const std::vector<double> row_axis{-1.0, 0.0, 1.0};
    const std::vector<double> col_axis{10.0, 20.0};
    const std::vector<double> values{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    write_matrix_csv(path, "tau_s\\nu_hz", col_axis, row_axis, values);

    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "tau_s\\nu_hz,10,20");
    REQUIRE(std::getline(in, line));
    CHECK(line == "-1,1,2");
    REQUIRE(std::getline(in, line));
    CHECK(line == "0,3,4");
    REQUIRE(std::getline(in, line));
    CHECK(line == "1,5,6");
    CHECK(!std::getline(in, line));

    CHECK_THROWS_AS(write_matrix_csv(path, "a\\b", col_axis, row_axis,
                                     std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("key-value CSV round-trips mixed entries")
{
    TempDir dir;
    const auto path = dir.file("summary.csv");
    write_kv_csv(path, {{"T_s", format_double(0.125)},
                        {"K", "8"},
                        {"isr_db", format_double(-12.3456789012345678)}});
    const auto map = read_kv_csv(path);
    CHECK(map.at("T_s") == "0.125");
    CHECK(map.at("K") == "8");
    CHECK(std::stod(map.at("isr_db")) == -12.3456789012345678);
}

TEST_CASE("load_design_config reads from disk and reports missing files")
{
    TempDir dir;
    const auto path = dir.file("design.cfg");
    {
        std::ofstream out(path);
        out << "delta_f = 25\nK = 2\nseed = 4\n";
    }
    const DesignConfig cfg = load_design_config(path);
    CHECK(cfg.delta_f == 25.0);
    CHECK(cfg.K == 2);

    CHECK_THROWS_AS(load_design_config(dir.file("missing.cfg")), ConfigError);
}
