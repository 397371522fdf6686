#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "spinmetric/commands.hpp"
#include "spinmetric/config.hpp"
#include "spinmetric/errors.hpp"

using namespace spinmetric;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("spinmetric_cmd_" + tag)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Parses a CSV with a header into named columns.
std::map<std::string, std::vector<double>> read_columns(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> names;
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) names.push_back(cell);
    std::map<std::string, std::vector<double>> cols;
    while (std::getline(in, line)) {
        std::stringstream rs(line);
        std::size_t i = 0;
        for (std::string cell; std::getline(rs, cell, ','); ++i) cols[names.at(i)].push_back(std::stod(cell));
    }
    return cols;
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

int run_cmd(const std::string& name, RunConfig cfg, const fs::path& out, int workers = 0) {
    cfg.set("out", out.string());
    std::ostringstream err;
    return commands::run(name, cfg, workers, err);
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = RunConfig::from_text("# comment\nG = 0.5\n\nN=10\nmu_list=1, 2,3\n");
    CHECK(cfg.real("G") == 0.5);
    CHECK(cfg.integer("N") == 10);
    CHECK(cfg.real_list("mu_list") == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(cfg.integer_list("N_list") == std::vector<int>{10, 14, 20, 28});
    CHECK_FALSE(cfg.has("t_max"));
    CHECK_FALSE(cfg.output_dir().has_value());

    try {
        RunConfig::from_text("bogus=1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "bogus");
    }
    CHECK_THROWS_AS(RunConfig::from_text("G\n"), ConfigError);

    RunConfig c;
    c.apply("G=abc");
    CHECK_THROWS_AS(c.real("G"), ConfigError);
    c.apply("include_metric=true");
    CHECK(c.boolean("include_metric"));
}

TEST_CASE("evolve at zero coupling leaves every observable constant") {
    TempDir dir("evolve_free");
    RunConfig cfg;
    cfg.set("G", "0");
    cfg.set("t_max", "5");
    REQUIRE(run_cmd("evolve", cfg, dir.path) == commands::kSuccess);
    CHECK(first_line(dir.path / "trace.csv") == "t,sx,sy,sz,px,py,pz,n_alpha,n_beta,energy,norm");
    const auto cols = read_columns(dir.path / "trace.csv");
    CHECK(cols.at("t").size() == 251);
    for (std::size_t k = 0; k < cols.at("t").size(); ++k) {
        CHECK(std::abs(cols.at("sx")[k] - 1.0) <= 1e-12);
        CHECK(std::abs(cols.at("px")[k] - 1.0) <= 1e-12);
        CHECK(std::abs(cols.at("n_alpha")[k]) <= 1e-12);
        CHECK(std::abs(cols.at("n_beta")[k]) <= 1e-12);
    }
    const std::string manifest = slurp(dir.path / "manifest.txt");
    CHECK(manifest.find("command=evolve\n") != std::string::npos);
    CHECK(manifest.find("checksum_sha256=") != std::string::npos);
}

TEST_CASE("evolve spin-y start precesses at zero coupling") {
    TempDir dir("evolve_y");
    RunConfig cfg;
    cfg.set("G", "0");
    cfg.set("direction", "y");
    cfg.set("t_max", "10");
    REQUIRE(run_cmd("evolve", cfg, dir.path) == commands::kSuccess);
    const auto cols = read_columns(dir.path / "trace.csv");
    const double w = 2.0 * std::sqrt(2.0);
    for (std::size_t k = 0; k < cols.at("t").size(); ++k) {
        const double t = cols.at("t")[k];
        CHECK(std::abs(cols.at("sy")[k] - std::cos(w * t)) <= 1e-8);
        CHECK(std::abs(cols.at("sz")[k] - std::sin(w * t)) <= 1e-8);
    }
}

TEST_CASE("evolve spin-x start keeps sy and sz at zero and writes the metric") {
    TempDir dir("evolve_x");
    RunConfig cfg;
    cfg.set("G", "0.05");
    cfg.set("t_max", "20");
    cfg.set("include_metric", "true");
    REQUIRE(run_cmd("evolve", cfg, dir.path) == commands::kSuccess);
    const auto cols = read_columns(dir.path / "trace.csv");
    for (std::size_t k = 0; k < cols.at("t").size(); ++k) {
        CHECK(std::abs(cols.at("sy")[k]) <= 1e-10);
        CHECK(std::abs(cols.at("sz")[k]) <= 1e-10);
    }
    CHECK(first_line(dir.path / "metric.csv") == "t,h11,h12");
    CHECK(read_columns(dir.path / "metric.csv").at("h11").size() == cols.at("t").size());
}

TEST_CASE("single-point sweep matches evolve and reruns are byte-identical") {
    TempDir a("sweep_a"), b("sweep_b"), e("sweep_evolve");
    RunConfig cfg;
    cfg.set("G_values", "0.05");
    cfg.set("t_max", "8");
    cfg.set("N", "10");
    REQUIRE(run_cmd("sweep", cfg, a.path) == commands::kSuccess);
    REQUIRE(run_cmd("sweep", cfg, b.path, 2) == commands::kSuccess);
    CHECK(slurp(a.path / "heatmap.csv") == slurp(b.path / "heatmap.csv"));
    CHECK(slurp(a.path / "diagnostics.csv") == slurp(b.path / "diagnostics.csv"));
    CHECK(first_line(a.path / "heatmap.csv") == "G,t,sx,px,n_alpha,n_beta");
    CHECK(first_line(a.path / "diagnostics.csv") == "G,revival_peak,first_peak_time");

    RunConfig ev;
    ev.set("G", "0.05");
    ev.set("t_max", "8");
    ev.set("N", "10");
    REQUIRE(run_cmd("evolve", ev, e.path) == commands::kSuccess);
    const auto heat = read_columns(a.path / "heatmap.csv");
    const auto trace = read_columns(e.path / "trace.csv");
    CHECK(heat.at("t") == trace.at("t"));
    CHECK(heat.at("sx") == trace.at("sx"));
    CHECK(heat.at("px") == trace.at("px"));
    CHECK(heat.at("n_alpha") == trace.at("n_alpha"));
    CHECK(heat.at("n_beta") == trace.at("n_beta"));
}

TEST_CASE("lattice report for the free lattice") {
    TempDir dir("lattice");
    RunConfig cfg;
    cfg.set("G", "0");
    cfg.set("k_points", "11");
    REQUIRE(run_cmd("lattice", cfg, dir.path) == commands::kSuccess);
    CHECK(first_line(dir.path / "bands.csv") == "kx,ky,E_minus,E_plus");
    CHECK(read_columns(dir.path / "bands.csv").at("kx").size() == 121);

    std::map<std::string, double> report;
    std::ifstream in(dir.path / "fermi_report.txt");
    for (std::string line; std::getline(in, line);) {
        const auto eq = line.find('=');
        report[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
    }
    CHECK(report.at("residual_P_plus") <= 1e-12);
    CHECK(report.at("residual_P_minus") <= 1e-12);
    CHECK(report.at("A_plus") == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.at("B_minus") == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gravity check row at mu = 2") {
    TempDir dir("gravity");
    RunConfig cfg;
    cfg.set("mu_list", "2");
    REQUIRE(run_cmd("gravity-check", cfg, dir.path) == commands::kSuccess);
    CHECK(first_line(dir.path / "gravity_check.csv") ==
          "mu,r,cosh2r,sinh2r,identity_residual,spacing,spacing_over_2mu,spacing_over_4mu,"
          "relative_variance,k_R");
    const auto cols = read_columns(dir.path / "gravity_check.csv");
    CHECK(cols.at("cosh2r")[0] == doctest::Approx(1.0));
    CHECK(cols.at("sinh2r")[0] == 0.0);
    CHECK(cols.at("spacing")[0] == doctest::Approx(8.0).epsilon(1e-9));
    CHECK(cols.at("identity_residual")[0] <= 1e-12);
}

TEST_CASE("convergence command") {
    TempDir dir("convergence");
    RunConfig cfg;
    cfg.set("G", "0");
    cfg.set("t_max", "2");
    cfg.set("N_list", "4,6,8");
    REQUIRE(run_cmd("convergence", cfg, dir.path) == commands::kSuccess);
    const auto cols = read_columns(dir.path / "convergence.csv");
    REQUIRE(cols.at("max_deviation").size() == 2);
    CHECK(cols.at("max_deviation")[0] <= 1e-12);
}

TEST_CASE("exit codes") {
    TempDir dir("errors");
    std::ostringstream err;

    RunConfig no_out;
    CHECK(commands::run("evolve", no_out, 0, err) == commands::kConfigError);

    RunConfig degenerate;
    degenerate.set("k_points", "1");
    CHECK(run_cmd("lattice", degenerate, dir.path) == commands::kConfigError);

    RunConfig bad_mu;
    bad_mu.set("mu", "-1");
    CHECK(run_cmd("evolve", bad_mu, dir.path) == commands::kConfigError);

    RunConfig bad_grid;
    bad_grid.set("G_values", "1,0.5");
    CHECK(run_cmd("sweep", bad_grid, dir.path) == commands::kConfigError);

    RunConfig bad_workers;
    bad_workers.set("G_values", "0.1");
    bad_workers.set("t_max", "1");
    bad_workers.set("workers", "0");
    CHECK(run_cmd("sweep", bad_workers, dir.path) == commands::kConfigError);

    // eps * beta = 1 removes every bond, so the Dirac cone cannot be extracted.
    RunConfig dead;
    dead.set("G", "0.15915494309189535");
    dead.set("beta_c", "1");
    dead.set("k_points", "3");
    CHECK(run_cmd("lattice", dead, dir.path) == commands::kNumericalError);

    CHECK(run_cmd("nonsense", RunConfig{}, dir.path) == commands::kConfigError);
}
