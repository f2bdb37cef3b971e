#include "latoc/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "latoc/io.hpp"

namespace latoc {

namespace {

namespace fs = std::filesystem;

std::string joined(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

ComplexVector realize_for_family(const RunConfig& config, const TargetSpec& spec) {
  return config.family == Family::lattice2d ? realize(spec, config.lattice2d)
                                            : realize(spec, config.lattice1d);
}

std::string population_label(const RunConfig& config, int i) {
  if (config.family == Family::lattice2d) {
    const auto [m, n] = unflatten(i, config.lattice2d);
    return "pop_" + std::to_string(m) + "_" + std::to_string(n);
  }
  return "pop_" + std::to_string(i - config.lattice1d.n_max);
}

// t, |<proj_i|psi>|^2 per projection (target first), then per-index populations
void write_observables(const std::string& path, const RunConfig& config,
                       const std::vector<ComplexVector>& traj, double dt,
                       const std::vector<ComplexVector>& projections) {
  std::vector<std::string> columns;
  columns.push_back("proj_target");
  for (std::size_t i = 1; i < projections.size(); ++i) {
    columns.push_back("proj_" + std::to_string(i - 1));
  }
  for (int i = 0; i < traj.front().size(); ++i) columns.push_back(population_label(config, i));

  std::vector<double> t(traj.size());
  std::vector<std::vector<double>> rows(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    t[k] = static_cast<double>(k) * dt;
    rows[k].reserve(projections.size() + static_cast<std::size_t>(traj[k].size()));
    for (const auto& proj : projections) rows[k].push_back(fidelity(proj, traj[k]));
    for (int i = 0; i < traj[k].size(); ++i) rows[k].push_back(std::norm(traj[k][i]));
  }
  write_timeseries_csv(path, columns, t, rows);
}

void write_final_populations(const RunConfig& config, const std::string& path,
                             const ComplexVector& psi) {
  if (config.family == Family::lattice2d) {
    write_populations_csv(path, psi, config.lattice2d);
  } else {
    write_populations_csv(path, psi);
  }
}

}  // namespace

int run_propagate(const RunConfig& config, const std::string& config_text,
                  std::optional<std::uint64_t> seed_override) {
  const std::uint64_t seed = seed_override.value_or(config.optimizer.seed);
  const ControlGrid control = make_run_control(config, seed);
  const Problem problem = make_problem(config);
  const ComplexVector psi0 = realize_for_family(config, config.initial);

  std::vector<ComplexVector> projections;
  projections.push_back(realize_for_family(config, config.target));
  for (const auto& spec : config.propagate.projections) {
    projections.push_back(realize_for_family(config, spec));
  }

  const auto traj = propagate(problem, psi0, control);
  const double dt = control.dt();
  const std::string& dir = config.output_dir;

  write_pulse_csv(joined(dir, "pulse.csv"), control);
  write_observables(joined(dir, "timeseries.csv"), config, traj, dt, projections);
  write_final_populations(config, joined(dir, "populations_final.csv"), traj.back());

  nlohmann::json summary;
  summary["family"] = to_string(config.family);
  summary["t_f"] = control.t_f;
  summary["n_steps"] = control.n_steps;
  summary["seed"] = seed;
  summary["final_norm"] = traj.back().norm();
  summary["final_target_projection"] = fidelity(projections.front(), traj.back());

  if (config.family == Family::gp1d && config.propagate.compare_rk4) {
    const GPParams gp{config.lattice1d, config.beta};
    const int substeps = std::max(1, config.propagate.rk4_substeps);
    const auto traj_rk4 = propagate_gp_rk4(gp, psi0, control, control.n_steps * substeps);
    write_observables(joined(dir, "timeseries_rk4.csv"), config, traj_rk4, dt, projections);
    double gap = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      gap = std::max(gap, std::abs(fidelity(projections.front(), traj[k]) -
                                   fidelity(projections.front(), traj_rk4[k])));
    }
    summary["rk4_max_projection_gap"] = gap;
  }

  if (config.family == Family::lattice2d) {
    const double edge = max_edge_population(config.lattice2d, traj);
    summary["max_edge_population"] = edge;
    if (edge > 1e-6) {
      std::cerr << "warning: truncation-edge population reached " << edge
                << "; increase m_max/n_max for trustworthy dynamics\n";
    }
  }
  if (config.propagate.write_density && config.family != Family::lattice2d) {
    const DVRTransform t(config.lattice1d);
    std::vector<std::string> columns;
    for (int j = 0; j < t.points(); ++j) columns.push_back("g_" + std::to_string(j));
    std::vector<double> ts(traj.size());
    std::vector<std::vector<double>> rows(traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
      ts[k] = static_cast<double>(k) * dt;
      const RealVector G = density_dvr(t, traj[k]);
      rows[k].assign(G.data(), G.data() + G.size());
    }
    write_timeseries_csv(joined(dir, "density.csv"), columns, ts, rows);
  }

  write_text_file(joined(dir, "summary.json"), summary.dump(2) + "\n");
  write_manifest_json(joined(dir, "manifest.json"), config_text, seed);
  return kExitOk;
}

int run_optimize(const RunConfig& config, const std::string& config_text,
                 std::optional<std::uint64_t> seed_override) {
  const std::uint64_t seed = seed_override.value_or(config.optimizer.seed);
  const ControlGrid control0 = make_run_control(config, seed);
  const Problem problem = make_problem(config);
  const ComplexVector psi0 = realize_for_family(config, config.initial);
  const ComplexVector target = realize_for_family(config, config.target);

  OptimizerSettings settings = config.optimizer;
  settings.seed = seed;
  const OptimizationResult result = optimize(problem, psi0, target, control0, settings);

  const std::string& dir = config.output_dir;
  write_pulse_csv(joined(dir, "pulse.csv"), result.control);
  write_trace_csv(joined(dir, "trace.csv"), result);
  const auto traj = propagate(problem, psi0, result.control);
  write_final_populations(config, joined(dir, "populations_final.csv"), traj.back());

  nlohmann::json summary;
  summary["family"] = to_string(config.family);
  summary["fidelity"] = result.fidelity;
  summary["fidelity_goal"] = settings.fidelity_goal;
  summary["iterations"] = result.iterations;
  summary["seed"] = seed;
  summary["termination"] = to_string(result.termination);
  write_text_file(joined(dir, "summary.json"), summary.dump(2) + "\n");
  write_manifest_json(joined(dir, "manifest.json"), config_text, seed);

  if (result.termination != Termination::goal_reached) {
    std::cerr << "optimization finished below the fidelity goal: F = " << result.fidelity
              << " (" << to_string(result.termination) << ")\n";
    return kExitBelowGoal;
  }
  return kExitOk;
}

int run_beta_scan(const RunConfig& config, const std::string& config_text,
                  std::optional<std::uint64_t> seed_override) {
  if (config.family != Family::gp1d) {
    throw ConfigError("beta-scan requires family gp1d");
  }
  if (config.beta_scan.betas.empty()) {
    throw ConfigError("beta-scan requires a non-empty beta_scan.betas grid");
  }
  if (!config.control.pulse_file && !config.beta_scan.optimize_at_beta) {
    throw ConfigError(
        "beta-scan needs a pulse source: control.pulse_file or beta_scan.optimize_at_beta");
  }

  const std::uint64_t seed = seed_override.value_or(config.optimizer.seed);
  const ComplexVector psi0 = realize_for_family(config, config.initial);
  const ComplexVector target = realize_for_family(config, config.target);
  const std::string& dir = config.output_dir;

  ControlGrid pulse = make_run_control(config, seed);
  if (!config.control.pulse_file) {
    const GPParams at{config.lattice1d, *config.beta_scan.optimize_at_beta};
    OptimizerSettings settings = config.optimizer;
    settings.seed = seed;
    const OptimizationResult result = optimize(at, psi0, target, pulse, settings);
    write_trace_csv(joined(dir, "trace.csv"), result);
    pulse = result.control;
  }
  write_pulse_csv(joined(dir, "pulse.csv"), pulse);

  std::vector<double> fidelities;
  for (double beta : config.beta_scan.betas) {
    const GPParams at{config.lattice1d, beta};
    const auto traj = propagate_gp(at, psi0, pulse);
    fidelities.push_back(fidelity(target, traj.back()));
  }

  std::string csv = "beta,fidelity\n";
  for (std::size_t i = 0; i < fidelities.size(); ++i) {
    csv += format_double(config.beta_scan.betas[i]) + "," + format_double(fidelities[i]) + "\n";
  }
  write_text_file(joined(dir, "beta_scan.csv"), csv);

  nlohmann::json summary;
  summary["family"] = to_string(config.family);
  summary["seed"] = seed;
  summary["betas"] = config.beta_scan.betas;
  summary["fidelities"] = fidelities;
  write_text_file(joined(dir, "summary.json"), summary.dump(2) + "\n");
  write_manifest_json(joined(dir, "manifest.json"), config_text, seed);
  return kExitOk;
}

}  // namespace latoc
