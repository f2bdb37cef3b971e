#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "latoc/io.hpp"

using namespace latoc;

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

struct CliFixture {
  fs::path dir;

  CliFixture() {
    dir = fs::temp_directory_path() / "latoc_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~CliFixture() { fs::remove_all(dir); }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  std::string config_file(const std::string& name, const std::string& text) const {
    write_text_file(path(name), text);
    return path(name);
  }

  CliRun run(const std::string& args) const {
    const std::string log = path("cli_output.log");
    const std::string cmd =
        std::string("\"") + LATOC_CLI_PATH + "\" " + args + " > \"" + log + "\" 2>&1";
    const int raw = std::system(cmd.c_str());
    CliRun result;
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.output = read_text_file(log);
    return result;
  }
};

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  Csv csv;
  std::string line;
  REQUIRE(std::getline(in, line));
  std::istringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) csv.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    REQUIRE(row.size() == csv.columns.size());
    csv.rows.push_back(row);
  }
  return csv;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate-config reports validity through the exit code") {
  CliFixture cli;
  const std::string good = cli.config_file("good.json", R"({
    "family": "linear1d",
    "initial": {"kind": "plane_wave", "n": 0},
    "target": {"kind": "plane_wave", "n": 2},
    "control": {"t_f": 7.6, "n_steps": 50}
  })");
  const CliRun ok = cli.run("validate-config \"" + good + "\"");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("config is valid") != std::string::npos);

  const std::string bad = cli.config_file("bad.json", "{ this is not json");
  CHECK(cli.run("validate-config \"" + bad + "\"").exit_code == 2);

  const std::string unknown = cli.config_file("unknown.json", R"({
    "family": "linear1d",
    "initial": {"kind": "plane_wave", "n": 0},
    "target": {"kind": "plane_wave", "n": 2},
    "control": {"t_f": 7.6, "n_steps": 50},
    "mystery": true
  })");
  const CliRun rejected = cli.run("validate-config \"" + unknown + "\"");
  CHECK(rejected.exit_code == 2);
  CHECK(rejected.output.find("$.mystery") != std::string::npos);

  CHECK(cli.run("validate-config \"" + cli.path("missing.json") + "\"").exit_code == 2);
  CHECK(cli.run("frobnicate").exit_code != 0);
}

TEST_CASE("propagate writes the run artifacts") {
  CliFixture cli;
  const std::string out = cli.path("prop_out");
  const std::string config = cli.config_file("prop.json", R"({
    "family": "linear1d",
    "lattice": {"n_max": 6},
    "initial": {"kind": "plane_wave", "n": 0},
    "target": {"kind": "plane_wave", "n": 2},
    "control": {"t_f": 2.0, "n_steps": 20, "init": {"kind": "constant", "amplitude": 0.0}},
    "propagate": {"projections": [{"kind": "plane_wave", "n": 1}]},
    "output_dir": ")" + out + R"("
  })");
  const CliRun run = cli.run("propagate \"" + config + "\"");
  CHECK(run.exit_code == 0);
  for (const char* name :
       {"pulse.csv", "timeseries.csv", "populations_final.csv", "summary.json",
        "manifest.json"}) {
    CHECK(fs::exists(fs::path(out) / name));
  }

  const Csv ts = read_csv((fs::path(out) / "timeseries.csv").string());
  REQUIRE(ts.rows.size() == 21);
  CHECK(ts.columns[0] == "t");
  CHECK(ts.columns[1] == "proj_target");
  CHECK(ts.columns[2] == "proj_0");
  for (std::size_t k = 0; k < ts.rows.size(); ++k) {
    if (k > 0) CHECK(ts.rows[k][0] > ts.rows[k - 1][0]);
    double pop_sum = 0.0;
    for (std::size_t c = 0; c < ts.columns.size(); ++c) {
      if (ts.columns[c].rfind("pop_", 0) == 0) pop_sum += ts.rows[k][c];
    }
    CHECK(std::abs(pop_sum - 1.0) < 1e-8);
    CHECK(ts.rows[k][1] >= 0.0);
    CHECK(ts.rows[k][1] <= 1.0 + 1e-12);
  }

  const Csv pops = read_csv((fs::path(out) / "populations_final.csv").string());
  CHECK(pops.columns == std::vector<std::string>{"index", "probability"});
  CHECK(pops.rows.size() == 13);

  const std::string summary = read_text_file((fs::path(out) / "summary.json").string());
  CHECK(summary.find("\"final_norm\"") != std::string::npos);
  CHECK(summary.find("\"final_target_projection\"") != std::string::npos);
}

TEST_CASE("propagate can cross-check the mean-field integrator and dump densities") {
  CliFixture cli;
  const std::string out = cli.path("gp_out");
  const std::string config = cli.config_file("gp.json", R"({
    "family": "gp1d",
    "lattice": {"n_max": 6},
    "beta": 0.5,
    "initial": {"kind": "squeezed", "xi": 1.0},
    "target": {"kind": "plane_wave", "n": 0},
    "control": {"t_f": 1.0, "n_steps": 100, "init": {"kind": "constant", "amplitude": 0.0}},
    "propagate": {"compare_rk4": true, "rk4_substeps": 4, "write_density": true},
    "output_dir": ")" + out + R"("
  })");
  const CliRun run = cli.run("propagate \"" + config + "\"");
  CHECK(run.exit_code == 0);
  CHECK(fs::exists(fs::path(out) / "timeseries_rk4.csv"));
  CHECK(fs::exists(fs::path(out) / "density.csv"));

  const std::string summary = read_text_file((fs::path(out) / "summary.json").string());
  const auto gap_pos = summary.find("\"rk4_max_projection_gap\": ");
  REQUIRE(gap_pos != std::string::npos);
  const double gap = std::stod(summary.substr(gap_pos + 26));
  CHECK(gap < 1e-3);

  const Csv density = read_csv((fs::path(out) / "density.csv").string());
  REQUIRE(density.rows.size() == 101);
  // quadrature weight 2 pi / N turns grid densities back into the unit norm
  const double weight = 2.0 * 3.14159265358979324 / 13.0;
  for (const auto& row : density.rows) {
    double sum = 0.0;
    for (std::size_t c = 1; c < row.size(); ++c) sum += row[c];
    CHECK(std::abs(weight * sum - 1.0) < 1e-8);
  }
}

TEST_CASE("optimize returns success only when the goal is met") {
  CliFixture cli;
  const std::string out = cli.path("opt_out");
  const std::string config = cli.config_file("opt.json", R"({
    "family": "linear1d",
    "lattice": {"n_max": 5},
    "initial": {"kind": "plane_wave", "n": 0},
    "target": {"kind": "plane_wave", "n": 2},
    "control": {"t_f": 7.6, "n_steps": 60, "init": {"kind": "uniform_random", "amplitude": 0.1}},
    "optimizer": {"fidelity_goal": 0.9, "max_iterations": 400, "seed": 1},
    "output_dir": ")" + out + R"("
  })");
  const CliRun run = cli.run("optimize \"" + config + "\"");
  CHECK(run.exit_code == 0);

  const std::string summary = read_text_file((fs::path(out) / "summary.json").string());
  CHECK(summary.find("\"termination\": \"goal_reached\"") != std::string::npos);

  const ControlGrid pulse = read_pulse_csv((fs::path(out) / "pulse.csv").string());
  CHECK(pulse.n_steps == 60);
  CHECK(std::abs(pulse.t_f - 7.6) < 1e-9);

  const Csv trace = read_csv((fs::path(out) / "trace.csv").string());
  CHECK(trace.columns == std::vector<std::string>{"iteration", "fidelity", "grad_norm"});
  CHECK(trace.rows.back()[1] >= 0.9);

  // an unreachable goal on a tiny budget exits through the below-goal code
  const std::string hopeless = cli.config_file("hopeless.json", R"({
    "family": "linear1d",
    "lattice": {"n_max": 5},
    "initial": {"kind": "plane_wave", "n": 0},
    "target": {"kind": "plane_wave", "n": 2},
    "control": {"t_f": 7.6, "n_steps": 60, "init": {"kind": "uniform_random", "amplitude": 0.1}},
    "optimizer": {"fidelity_goal": 0.999999, "max_iterations": 1, "seed": 1},
    "output_dir": ")" + cli.path("hopeless_out") + R"("
  })");
  CHECK(cli.run("optimize \"" + hopeless + "\"").exit_code == 3);
}

TEST_CASE("beta-scan sweeps one pulse across coupling strengths") {
  CliFixture cli;
  const std::string out = cli.path("scan_out");
  const std::string config = cli.config_file("scan.json", R"({
    "family": "gp1d",
    "lattice": {"n_max": 4},
    "beta": 0.0,
    "initial": {"kind": "plane_wave", "n": 0},
    "target": {"kind": "plane_wave", "n": 1},
    "control": {"t_f": 4.0, "n_steps": 30, "init": {"kind": "uniform_random", "amplitude": 0.1}},
    "optimizer": {"fidelity_goal": 0.8, "max_iterations": 200, "seed": 3},
    "beta_scan": {"betas": [0.0, 0.25, 0.5], "optimize_at_beta": 0.0},
    "output_dir": ")" + out + R"("
  })");
  const CliRun run = cli.run("beta-scan \"" + config + "\"");
  CHECK(run.exit_code == 0);

  const Csv scan = read_csv((fs::path(out) / "beta_scan.csv").string());
  CHECK(scan.columns == std::vector<std::string>{"beta", "fidelity"});
  REQUIRE(scan.rows.size() == 3);
  CHECK(scan.rows[0][0] == 0.0);
  CHECK(scan.rows[2][0] == 0.5);
  for (const auto& row : scan.rows) {
    CHECK(row[1] >= 0.0);
    CHECK(row[1] <= 1.0 + 1e-12);
  }
  CHECK(fs::exists(fs::path(out) / "trace.csv"));
  CHECK(fs::exists(fs::path(out) / "pulse.csv"));

  // without a pulse source the subcommand is a configuration error
  const std::string sourceless = cli.config_file("sourceless.json", R"({
    "family": "gp1d",
    "lattice": {"n_max": 4},
    "initial": {"kind": "plane_wave", "n": 0},
    "target": {"kind": "plane_wave", "n": 1},
    "control": {"t_f": 4.0, "n_steps": 30},
    "beta_scan": {"betas": [0.0, 0.5]},
    "output_dir": ")" + cli.path("sourceless_out") + R"("
  })");
  CHECK(cli.run("beta-scan \"" + sourceless + "\"").exit_code == 2);
}

TEST_CASE("seed and output directory overrides take precedence") {
  CliFixture cli;
  const std::string config = cli.config_file("seeded.json", R"({
    "family": "linear1d",
    "lattice": {"n_max": 4},
    "initial": {"kind": "plane_wave", "n": 0},
    "target": {"kind": "plane_wave", "n": 1},
    "control": {"t_f": 1.0, "n_steps": 10, "init": {"kind": "uniform_random", "amplitude": 0.2}},
    "optimizer": {"seed": 11},
    "output_dir": ")" + cli.path("unused") + R"("
  })");

  const std::string out_a = cli.path("seed_a");
  const std::string out_b = cli.path("seed_b");
  CHECK(cli.run("propagate \"" + config + "\" --seed 5 --output-dir \"" + out_a + "\"")
            .exit_code == 0);
  CHECK(cli.run("propagate \"" + config + "\" --seed 5 --output-dir \"" + out_b + "\"")
            .exit_code == 0);
  CHECK(!fs::exists(cli.path("unused")));

  const std::string pulse_a = read_text_file((fs::path(out_a) / "pulse.csv").string());
  const std::string pulse_b = read_text_file((fs::path(out_b) / "pulse.csv").string());
  CHECK(pulse_a == pulse_b);

  const std::string summary = read_text_file((fs::path(out_a) / "summary.json").string());
  CHECK(summary.find("\"seed\": 5") != std::string::npos);

  const std::string out_c = cli.path("seed_c");
  CHECK(cli.run("propagate \"" + config + "\" --seed 6 --output-dir \"" + out_c + "\"")
            .exit_code == 0);
  CHECK(read_text_file((fs::path(out_c) / "pulse.csv").string()) != pulse_a);
}

}  // TEST_SUITE
