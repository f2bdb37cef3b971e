#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "latoc/grape.hpp"
#include "latoc/states.hpp"

namespace latoc {

// configuration problems carry the JSON pointer of the offending field so the
// CLI can print exactly where a run file went wrong
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class Family { linear1d, gp1d, lattice2d };
const char* to_string(Family f);

struct ControlConfig {
  double t_f = 0.0;                  // dimensionless, canonical
  std::optional<double> t_f_us;      // alternative entry in microseconds
  int n_steps = 0;
  std::vector<bool> optimizable;     // empty = every channel free
  InitStrategy init;
  std::optional<std::string> pulse_file;  // start from a stored pulse instead
};

struct PropagateConfig {
  bool compare_rk4 = false;  // gp1d only: also integrate with RK4 and persist both
  int rk4_substeps = 4;      // RK4 stages per control step
  std::vector<TargetSpec> projections;  // extra observables |<spec|psi(t)>|^2
  bool write_density = false;           // 1D position-grid density per step
};

struct BetaScanConfig {
  std::vector<double> betas;
  std::optional<double> optimize_at_beta;  // optimize here first if no pulse file
};

struct RunConfig {
  Family family = Family::linear1d;
  Lattice1DParams lattice1d;  // read when family is linear1d or gp1d
  double beta = 0.0;          // gp1d only
  Lattice2DParams lattice2d;  // read when family is lattice2d
  Gradient2DRule gradient_rule = Gradient2DRule::exact;
  TargetSpec initial = PlaneWave1DSpec{0};
  TargetSpec target = PlaneWave1DSpec{0};
  ControlConfig control;
  OptimizerSettings optimizer;
  PropagateConfig propagate;
  BetaScanConfig beta_scan;
  std::string output_dir = "runs/out";
};

RunConfig parse_config(const std::string& json_text);  // throws ConfigError
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);  // parse(serialize(c)) == c

Problem make_problem(const RunConfig& config);
// resolves t_f_us through the family's unit conversion when present
double resolved_t_f(const RunConfig& config);
ControlGrid make_run_control(const RunConfig& config, std::uint64_t seed);

}  // namespace latoc
