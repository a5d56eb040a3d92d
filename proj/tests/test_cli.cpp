#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "istail/config.hpp"
#include "istail/report_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("istail_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const fs::path out = scratch_dir() / "stdout.txt";
    const fs::path err = scratch_dir() / "stderr.txt";
    const std::string cmd =
        std::string(ISTAIL_BIN) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int rc = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    std::ofstream f(p);
    f << content;
    return p;
}

const char* kGoodConfig = R"({
  "alpha": 2.0,
  "n": 2,
  "levels": [0.99, 0.999],
  "algorithm": "conditional_mixture",
  "mode": "var",
  "num_samples": 300,
  "replications": 4,
  "seed": 77
})";

}  // namespace

TEST_CASE("estimate: csv output, determinism, exact round trip") {
    const fs::path cfg = write_file("good.json", kGoodConfig);
    const fs::path out1 = scratch_dir() / "report1.csv";
    const fs::path out2 = scratch_dir() / "report2.csv";

    const auto r1 = run_cli("estimate --config " + cfg.string() + " --out " + out1.string());
    REQUIRE(r1.exit_code == 0);
    const auto r2 = run_cli("estimate --config " + cfg.string() + " --out " + out2.string());
    REQUIRE(r2.exit_code == 0);

    const std::string text1 = slurp(out1);
    CHECK(text1 == slurp(out2));
    CHECK(text1.rfind("level_p,lambda,mean_estimate", 0) == 0);

    // Parsing the emitted CSV must recover the report exactly.
    std::istringstream in(text1);
    const auto rows = istail::io::read_report_csv(in);
    REQUIRE(rows.size() == 2);

    istail::CliConfig parsed = istail::parse_cli_config(kGoodConfig);
    const auto report = istail::run_experiment(parsed.experiment);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].level_p == report.levels[i].level_p);
        CHECK(rows[i].lambda == report.levels[i].lambda);
        CHECK(rows[i].mean_estimate == report.levels[i].mean_estimate);
        CHECK(rows[i].std_dev == report.levels[i].std_dev);
        CHECK(rows[i].mass_deficit_count == report.levels[i].mass_deficit_count);
        CHECK(rows[i].replications == 4);
    }
}

TEST_CASE("estimate: seed override changes output, table format renders") {
    const fs::path cfg = write_file("good.json", kGoodConfig);
    const auto base = run_cli("estimate --config " + cfg.string());
    const auto reseeded = run_cli("estimate --config " + cfg.string() + " --seed 1234");
    REQUIRE(base.exit_code == 0);
    REQUIRE(reseeded.exit_code == 0);
    CHECK(base.out != reseeded.out);

    const auto table = run_cli("estimate --config " + cfg.string() + " --format table");
    REQUIRE(table.exit_code == 0);
    CHECK(table.out.find("algorithm: conditional_mixture") != std::string::npos);
    CHECK(table.out.find("estimate") != std::string::npos);
}

TEST_CASE("estimate: error handling with distinct exit codes") {
    SUBCASE("missing file -> 2") {
        const auto r = run_cli("estimate --config /nonexistent/istail.json");
        CHECK(r.exit_code == 2);
        CHECK(r.err.find("cannot open") != std::string::npos);
    }
    SUBCASE("schema violation names the field -> 3") {
        const fs::path cfg = write_file("bad_level.json", R"({
          "alpha": 2.0, "n": 2, "levels": [1.5],
          "algorithm": "conditional_mixture", "mode": "var",
          "num_samples": 100, "replications": 2, "seed": 1
        })");
        const auto r = run_cli("estimate --config " + cfg.string());
        CHECK(r.exit_code == 3);
        CHECK(r.err.find("levels") != std::string::npos);
    }
    SUBCASE("unknown key rejected -> 3") {
        const fs::path cfg = write_file("unknown_key.json", R"({
          "alpha": 2.0, "n": 2, "levels": [0.9],
          "algorithm": "conditional_mixture", "mode": "var",
          "num_samples": 100, "replications": 2, "seed": 1,
          "bogus_option": true
        })");
        const auto r = run_cli("estimate --config " + cfg.string());
        CHECK(r.exit_code == 3);
        CHECK(r.err.find("bogus_option") != std::string::npos);
    }
    SUBCASE("malformed JSON -> 3") {
        const fs::path cfg = write_file("broken.json", "{ not json");
        const auto r = run_cli("estimate --config " + cfg.string());
        CHECK(r.exit_code == 3);
    }
    SUBCASE("sampler-level config error -> 4") {
        const fs::path cfg = write_file("bad_mix.json", R"({
          "alpha": 2.0, "n": 3, "levels": [0.9],
          "algorithm": "conditional_mixture", "mode": "var",
          "num_samples": 100, "replications": 2, "seed": 1,
          "mix_p": [0.5]
        })");
        const auto r = run_cli("estimate --config " + cfg.string());
        CHECK(r.exit_code == 4);
        CHECK(r.err.find("mix_p") != std::string::npos);
    }
}

TEST_CASE("reproduce-table: desk-scale csv and text output") {
    const fs::path out = scratch_dir() / "table1.csv";
    const auto r = run_cli("reproduce-table --table 1 --samples 60 --reps 3 --seed 7 --out " +
                           out.string());
    REQUIRE(r.exit_code == 0);

    std::istringstream in(slurp(out));
    const auto cells = istail::io::read_table_csv(in);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0].n == 10);
    CHECK(cells[5].n == 30);
    CHECK(cells[0].one_minus_p == 1e-2);
    CHECK(cells[2].one_minus_p == 1e-5);

    const auto text = run_cli("reproduce-table --table 2 --samples 60 --reps 2 --seed 7 "
                              "--format table");
    REQUIRE(text.exit_code == 0);
    CHECK(text.out.find("table 2") != std::string::npos);
    CHECK(text.out.find("DLW") != std::string::npos);

    const auto bad = run_cli("reproduce-table --table 9 --samples 10 --reps 2");
    CHECK(bad.exit_code != 0);
}

TEST_CASE("reproduce-table: csv round-trips exactly through the library writer") {
    const auto run = istail::run_table(1, 50, 2, 11, 1);
    std::ostringstream out;
    istail::io::write_table_csv(out, run);
    std::istringstream in(out.str());
    const auto cells = istail::io::read_table_csv(in);
    REQUIRE(cells.size() == run.cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        CHECK(cells[i].true_value == run.cells[i].true_value);
        CHECK(cells[i].approx == run.cells[i].approx);
        CHECK(cells[i].sm_mean == run.cells[i].sm_mean);
        CHECK(cells[i].sm_std == run.cells[i].sm_std);
        CHECK(cells[i].dlw_mean == run.cells[i].dlw_mean);
        CHECK(cells[i].dlw_std == run.cells[i].dlw_std);
        CHECK(cells[i].mc_mean == run.cells[i].mc_mean);
        CHECK(cells[i].mc_std == run.cells[i].mc_std);
        CHECK(cells[i].avg_time_s == run.cells[i].avg_time_s);
    }
}

TEST_CASE("diagnose: degenerate single-step ratio is exactly one") {
    const fs::path cfg = write_file("diag.json", R"({
      "alpha": 2.0, "n": 1, "levels": [0.99],
      "algorithm": "conditional_mixture", "mode": "tail_prob",
      "num_samples": 2000, "replications": 1, "seed": 3
    })");
    const auto r = run_cli("diagnose --config " + cfg.string() + " --c-grid 1");
    REQUIRE(r.exit_code == 0);

    std::istringstream in(r.out);
    std::string header, row;
    REQUIRE(std::getline(in, header));
    CHECK(header.rfind("c,second_moment_ratio", 0) == 0);
    REQUIRE(std::getline(in, row));
    std::stringstream fields(row);
    std::string c_field, ratio_field;
    std::getline(fields, c_field, ',');
    std::getline(fields, ratio_field, ',');
    CHECK(std::strtod(ratio_field.c_str(), nullptr) == 1.0);
}

TEST_CASE("diagnose: ratio column falls as c rises; table mode shows bounds") {
    const fs::path cfg = write_file("diag2.json", R"({
      "alpha": 2.0, "n": 3, "levels": [0.999],
      "algorithm": "conditional_mixture", "mode": "tail_prob",
      "num_samples": 5000, "replications": 1, "seed": 4
    })");
    const auto r = run_cli("diagnose --config " + cfg.string() + " --c-grid 1,2,4");
    REQUIRE(r.exit_code == 0);

    std::istringstream in(r.out);
    std::string line;
    REQUIRE(std::getline(in, line));  // header
    double prev_ratio = 1e300;
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream fields(line);
        std::string c_field, ratio_field;
        std::getline(fields, c_field, ',');
        std::getline(fields, ratio_field, ',');
        const double ratio = std::strtod(ratio_field.c_str(), nullptr);
        CHECK(ratio <= prev_ratio);
        prev_ratio = ratio;
        ++rows;
    }
    CHECK(rows == 3);

    const auto table = run_cli("diagnose --config " + cfg.string() + " --format table");
    REQUIRE(table.exit_code == 0);
    CHECK(table.out.find("var_ratio_bound:") != std::string::npos);
    CHECK(table.out.find("es_ratio_bound: not applicable (alpha <= 2)") != std::string::npos);
}

TEST_CASE("diagnose: alpha > 2 prints a finite shortfall bound") {
    const fs::path cfg = write_file("diag3.json", R"({
      "alpha": 3.0, "n": 2, "levels": [0.999],
      "algorithm": "conditional_mixture", "mode": "tail_prob",
      "num_samples": 2000, "replications": 1, "seed": 5
    })");
    const auto table = run_cli("diagnose --config " + cfg.string() + " --format table");
    REQUIRE(table.exit_code == 0);
    CHECK(table.out.find("es_ratio_bound: ") != std::string::npos);
    CHECK(table.out.find("es_ratio_bound: not applicable") == std::string::npos);
}

TEST_CASE("stdout fallback when --out is omitted") {
    const fs::path cfg = write_file("good.json", kGoodConfig);
    const auto r = run_cli("estimate --config " + cfg.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("level_p,", 0) == 0);
}
