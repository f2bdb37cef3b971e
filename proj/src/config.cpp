#include "latoc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "latoc/io.hpp"
#include "latoc/units.hpp"

namespace latoc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at " + where + ": " + what);
}

void check_object(const json& j, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) fail(where + "." + key, "unknown key");
  }
}

double get_number(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where + "." + key, "missing required number");
  const auto& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

double get_number_or(const json& j, const std::string& where, const char* key, double def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number()) fail(where + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where + "." + key, "missing required integer");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

int get_int_or(const json& j, const std::string& where, const char* key, int def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) fail(where + "." + key, "missing required string");
  const auto& v = j.at(key);
  if (!v.is_string()) fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

bool get_bool_or(const json& j, const std::string& where, const char* key, bool def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
  return v.get<bool>();
}

TargetSpec parse_state(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a state object");
  const std::string kind = get_string(j, where, "kind");
  if (kind == "plane_wave") {
    check_object(j, where, {"kind", "n"});
    return PlaneWave1DSpec{get_int(j, where, "n")};
  }
  if (kind == "superposition") {
    check_object(j, where, {"kind", "terms"});
    if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty()) {
      fail(where + ".terms", "expected a non-empty array");
    }
    Superposition1DSpec spec;
    int idx = 0;
    for (const auto& term : j.at("terms")) {
      const std::string tw = where + ".terms[" + std::to_string(idx++) + "]";
      check_object(term, tw, {"n", "re", "im"});
      spec.terms.emplace_back(get_int(term, tw, "n"),
                              Complex(get_number_or(term, tw, "re", 1.0),
                                      get_number_or(term, tw, "im", 0.0)));
    }
    return spec;
  }
  if (kind == "squeezed") {
    check_object(j, where, {"kind", "x_c", "p_c", "xi"});
    return Squeezed1DSpec{get_number_or(j, where, "x_c", 0.0),
                          get_number_or(j, where, "p_c", 0.0),
                          get_number(j, where, "xi")};
  }
  if (kind == "plane_wave_2d") {
    check_object(j, where, {"kind", "m", "n"});
    return PlaneWave2DSpec{get_int(j, where, "m"), get_int(j, where, "n")};
  }
  if (kind == "superposition_2d") {
    check_object(j, where, {"kind", "terms"});
    if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty()) {
      fail(where + ".terms", "expected a non-empty array");
    }
    Superposition2DSpec spec;
    int idx = 0;
    for (const auto& term : j.at("terms")) {
      const std::string tw = where + ".terms[" + std::to_string(idx++) + "]";
      check_object(term, tw, {"m", "n", "re", "im"});
      spec.terms.emplace_back(
          std::make_pair(get_int(term, tw, "m"), get_int(term, tw, "n")),
          Complex(get_number_or(term, tw, "re", 1.0), get_number_or(term, tw, "im", 0.0)));
    }
    return spec;
  }
  fail(where + ".kind", "unknown state kind '" + kind + "'");
}

json serialize_state(const TargetSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        json j;
        if constexpr (std::is_same_v<T, PlaneWave1DSpec>) {
          j["kind"] = "plane_wave";
          j["n"] = s.n;
        } else if constexpr (std::is_same_v<T, Superposition1DSpec>) {
          j["kind"] = "superposition";
          j["terms"] = json::array();
          for (const auto& [n, amp] : s.terms) {
            j["terms"].push_back({{"n", n}, {"re", amp.real()}, {"im", amp.imag()}});
          }
        } else if constexpr (std::is_same_v<T, Squeezed1DSpec>) {
          j["kind"] = "squeezed";
          j["x_c"] = s.x_c;
          j["p_c"] = s.p_c;
          j["xi"] = s.xi;
        } else if constexpr (std::is_same_v<T, PlaneWave2DSpec>) {
          j["kind"] = "plane_wave_2d";
          j["m"] = s.m;
          j["n"] = s.n;
        } else {
          j["kind"] = "superposition_2d";
          j["terms"] = json::array();
          for (const auto& [mn, amp] : s.terms) {
            j["terms"].push_back(
                {{"m", mn.first}, {"n", mn.second}, {"re", amp.real()}, {"im", amp.imag()}});
          }
        }
        return j;
      },
      spec);
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::linear1d: return "linear1d";
    case Family::gp1d: return "gp1d";
    case Family::lattice2d: return "lattice2d";
  }
  return "unknown";
}

RunConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_object(root, "$",
               {"family", "lattice", "beta", "lattice_2d", "gradient_rule", "initial", "target",
                "control", "optimizer", "propagate", "beta_scan", "output_dir"});

  RunConfig config;
  const std::string family = get_string(root, "$", "family");
  if (family == "linear1d") {
    config.family = Family::linear1d;
  } else if (family == "gp1d") {
    config.family = Family::gp1d;
  } else if (family == "lattice2d") {
    config.family = Family::lattice2d;
  } else {
    fail("$.family", "expected linear1d, gp1d, or lattice2d");
  }

  if (config.family == Family::lattice2d) {
    if (root.contains("lattice") || root.contains("beta")) {
      fail("$", "1D keys (lattice, beta) are not valid for family lattice2d");
    }
    if (!root.contains("lattice_2d")) fail("$.lattice_2d", "missing for family lattice2d");
    const auto& l = root.at("lattice_2d");
    check_object(l, "$.lattice_2d", {"s", "m_max", "n_max"});
    config.lattice2d.s = get_number_or(l, "$.lattice_2d", "s", 5.0);
    config.lattice2d.m_max = get_int_or(l, "$.lattice_2d", "m_max", 5);
    config.lattice2d.n_max = get_int_or(l, "$.lattice_2d", "n_max", 5);
    if (root.contains("gradient_rule")) {
      const std::string rule = get_string(root, "$", "gradient_rule");
      if (rule == "exact") {
        config.gradient_rule = Gradient2DRule::exact;
      } else if (rule == "phase_free") {
        config.gradient_rule = Gradient2DRule::phase_free;
      } else {
        fail("$.gradient_rule", "expected exact or phase_free");
      }
    }
  } else {
    if (root.contains("lattice_2d") || root.contains("gradient_rule")) {
      fail("$", "2D keys (lattice_2d, gradient_rule) are not valid for a 1D family");
    }
    if (root.contains("lattice")) {
      const auto& l = root.at("lattice");
      check_object(l, "$.lattice", {"s", "q", "n_max"});
      config.lattice1d.s = get_number_or(l, "$.lattice", "s", 5.0);
      config.lattice1d.q = get_number_or(l, "$.lattice", "q", 0.0);
      config.lattice1d.n_max = get_int_or(l, "$.lattice", "n_max", 10);
    }
    if (config.family == Family::gp1d) {
      config.beta = get_number_or(root, "$", "beta", 0.0);
    } else if (root.contains("beta")) {
      fail("$.beta", "only valid for family gp1d");
    }
  }

  if (!root.contains("initial")) fail("$.initial", "missing initial state");
  if (!root.contains("target")) fail("$.target", "missing target state");
  config.initial = parse_state(root.at("initial"), "$.initial");
  config.target = parse_state(root.at("target"), "$.target");

  if (!root.contains("control")) fail("$.control", "missing control section");
  const auto& c = root.at("control");
  check_object(c, "$.control",
               {"t_f", "t_f_us", "n_steps", "optimizable", "init", "pulse_file"});
  const bool has_tf = c.contains("t_f");
  const bool has_tf_us = c.contains("t_f_us");
  if (has_tf == has_tf_us) {
    fail("$.control", "exactly one of t_f (dimensionless) or t_f_us must be given");
  }
  if (has_tf) config.control.t_f = get_number(c, "$.control", "t_f");
  if (has_tf_us) config.control.t_f_us = get_number(c, "$.control", "t_f_us");
  config.control.n_steps = get_int(c, "$.control", "n_steps");
  if (c.contains("optimizable")) {
    const auto& flags = c.at("optimizable");
    if (!flags.is_array()) fail("$.control.optimizable", "expected an array of booleans");
    for (const auto& f : flags) {
      if (!f.is_boolean()) fail("$.control.optimizable", "expected an array of booleans");
      config.control.optimizable.push_back(f.get<bool>());
    }
  }
  if (c.contains("init")) {
    const auto& init = c.at("init");
    check_object(init, "$.control.init", {"kind", "amplitude"});
    const std::string kind = get_string(init, "$.control.init", "kind");
    if (kind == "constant") {
      config.control.init.kind = InitKind::constant;
    } else if (kind == "uniform_random") {
      config.control.init.kind = InitKind::uniform_random;
    } else {
      fail("$.control.init.kind", "expected constant or uniform_random");
    }
    config.control.init.amplitude = get_number_or(init, "$.control.init", "amplitude", 0.1);
  }
  if (c.contains("pulse_file")) {
    config.control.pulse_file = get_string(c, "$.control", "pulse_file");
  }

  if (root.contains("optimizer")) {
    const auto& o = root.at("optimizer");
    check_object(o, "$.optimizer",
                 {"fidelity_goal", "max_iterations", "initial_step", "max_halvings",
                  "stall_grad_norm", "seed"});
    config.optimizer.fidelity_goal = get_number_or(o, "$.optimizer", "fidelity_goal", 0.999);
    config.optimizer.max_iterations = get_int_or(o, "$.optimizer", "max_iterations", 2000);
    config.optimizer.initial_step = get_number_or(o, "$.optimizer", "initial_step", 1.0);
    config.optimizer.max_halvings = get_int_or(o, "$.optimizer", "max_halvings", 40);
    config.optimizer.stall_grad_norm =
        get_number_or(o, "$.optimizer", "stall_grad_norm", 1e-10);
    if (o.contains("seed")) {
      if (!o.at("seed").is_number_unsigned()) fail("$.optimizer.seed", "expected an unsigned integer");
      config.optimizer.seed = o.at("seed").get<std::uint64_t>();
    }
  }

  if (root.contains("propagate")) {
    const auto& pr = root.at("propagate");
    check_object(pr, "$.propagate",
                 {"compare_rk4", "rk4_substeps", "projections", "write_density"});
    config.propagate.compare_rk4 = get_bool_or(pr, "$.propagate", "compare_rk4", false);
    config.propagate.rk4_substeps = get_int_or(pr, "$.propagate", "rk4_substeps", 4);
    config.propagate.write_density = get_bool_or(pr, "$.propagate", "write_density", false);
    if (pr.contains("projections")) {
      const auto& projections = pr.at("projections");
      if (!projections.is_array()) fail("$.propagate.projections", "expected an array");
      int idx = 0;
      for (const auto& s : projections) {
        config.propagate.projections.push_back(
            parse_state(s, "$.propagate.projections[" + std::to_string(idx++) + "]"));
      }
    }
  }

  if (root.contains("beta_scan")) {
    const auto& b = root.at("beta_scan");
    check_object(b, "$.beta_scan", {"betas", "optimize_at_beta"});
    if (!b.contains("betas") || !b.at("betas").is_array() || b.at("betas").empty()) {
      fail("$.beta_scan.betas", "expected a non-empty array of numbers");
    }
    for (const auto& v : b.at("betas")) {
      if (!v.is_number()) fail("$.beta_scan.betas", "expected numbers");
      config.beta_scan.betas.push_back(v.get<double>());
    }
    if (b.contains("optimize_at_beta")) {
      config.beta_scan.optimize_at_beta = get_number(b, "$.beta_scan", "optimize_at_beta");
    }
  }

  if (root.contains("output_dir")) {
    config.output_dir = get_string(root, "$", "output_dir");
  }

  // semantic checks beyond shape: family params, control grid, state indices
  try {
    validate_problem(make_problem(config));
    if (!config.control.pulse_file) {
      if (config.control.n_steps <= 0) fail("$.control.n_steps", "must be positive");
      if (!(resolved_t_f(config) > 0.0)) fail("$.control", "final time must be positive");
    }
    const int channels = config.family == Family::lattice2d ? 3 : 1;
    if (!config.control.optimizable.empty() &&
        static_cast<int>(config.control.optimizable.size()) != channels) {
      fail("$.control.optimizable", "flag count must match the family's channel count");
    }
    if (config.family == Family::lattice2d) {
      realize(config.initial, config.lattice2d);
      realize(config.target, config.lattice2d);
    } else {
      realize(config.initial, config.lattice1d);
      realize(config.target, config.lattice1d);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& config) {
  json root;
  root["family"] = to_string(config.family);
  if (config.family == Family::lattice2d) {
    root["lattice_2d"] = {{"s", config.lattice2d.s},
                          {"m_max", config.lattice2d.m_max},
                          {"n_max", config.lattice2d.n_max}};
    root["gradient_rule"] =
        config.gradient_rule == Gradient2DRule::exact ? "exact" : "phase_free";
  } else {
    root["lattice"] = {{"s", config.lattice1d.s},
                       {"q", config.lattice1d.q},
                       {"n_max", config.lattice1d.n_max}};
    if (config.family == Family::gp1d) root["beta"] = config.beta;
  }
  root["initial"] = serialize_state(config.initial);
  root["target"] = serialize_state(config.target);

  json c;
  if (config.control.t_f_us) {
    c["t_f_us"] = *config.control.t_f_us;
  } else {
    c["t_f"] = config.control.t_f;
  }
  c["n_steps"] = config.control.n_steps;
  if (!config.control.optimizable.empty()) {
    c["optimizable"] = json::array();
    for (bool f : config.control.optimizable) c["optimizable"].push_back(f);
  }
  c["init"] = {{"kind", config.control.init.kind == InitKind::constant ? "constant"
                                                                       : "uniform_random"},
               {"amplitude", config.control.init.amplitude}};
  if (config.control.pulse_file) c["pulse_file"] = *config.control.pulse_file;
  root["control"] = c;

  root["optimizer"] = {{"fidelity_goal", config.optimizer.fidelity_goal},
                       {"max_iterations", config.optimizer.max_iterations},
                       {"initial_step", config.optimizer.initial_step},
                       {"max_halvings", config.optimizer.max_halvings},
                       {"stall_grad_norm", config.optimizer.stall_grad_norm},
                       {"seed", config.optimizer.seed}};

  json pr;
  pr["compare_rk4"] = config.propagate.compare_rk4;
  pr["rk4_substeps"] = config.propagate.rk4_substeps;
  pr["write_density"] = config.propagate.write_density;
  if (!config.propagate.projections.empty()) {
    pr["projections"] = json::array();
    for (const auto& s : config.propagate.projections) pr["projections"].push_back(serialize_state(s));
  }
  root["propagate"] = pr;

  if (!config.beta_scan.betas.empty()) {
    json b;
    b["betas"] = config.beta_scan.betas;
    if (config.beta_scan.optimize_at_beta) b["optimize_at_beta"] = *config.beta_scan.optimize_at_beta;
    root["beta_scan"] = b;
  }
  root["output_dir"] = config.output_dir;
  return root.dump(2) + "\n";
}

Problem make_problem(const RunConfig& config) {
  switch (config.family) {
    case Family::linear1d: return config.lattice1d;
    case Family::gp1d: return GPParams{config.lattice1d, config.beta};
    case Family::lattice2d: return TwoDProblem{config.lattice2d, config.gradient_rule};
  }
  throw ConfigError("config has an unknown family");
}

double resolved_t_f(const RunConfig& config) {
  if (config.control.t_f_us) {
    const double seconds = *config.control.t_f_us * 1e-6;
    return config.family == Family::lattice2d ? units::dimensionless_time_2d(seconds)
                                              : units::dimensionless_time_1d(seconds);
  }
  return config.control.t_f;
}

ControlGrid make_run_control(const RunConfig& config, std::uint64_t seed) {
  const int channels = config.family == Family::lattice2d ? 3 : 1;
  ControlGrid control;
  if (config.control.pulse_file) {
    control = read_pulse_csv(*config.control.pulse_file);
    if (control.channels() != channels) {
      throw ConfigError("pulse file channel count does not match the config family");
    }
  } else {
    control = make_initial_control(resolved_t_f(config), config.control.n_steps, channels,
                                   config.control.init, seed);
  }
  control.optimizable = config.control.optimizable;
  control.validate();
  return control;
}

}  // namespace latoc
