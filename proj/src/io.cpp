#include "latoc/io.hpp"

#include <Eigen/Core>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace latoc {

namespace {

void ensure_parent_dir(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::ofstream open_for_write(const std::string& path) {
  ensure_parent_dir(path);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

void write_pulse_csv(const std::string& path, const ControlGrid& control) {
  control.validate();
  auto out = open_for_write(path);
  if (control.channels() == 1) {
    out << "step_index,t_start,phi\n";
  } else if (control.channels() == 3) {
    out << "step_index,t_start,phi12,phi23,phi31\n";
  } else {
    throw std::invalid_argument("pulse csv: supported channel counts are 1 and 3");
  }
  const double dt = control.dt();
  for (int k = 0; k < control.n_steps; ++k) {
    out << k << ',' << format_double(k * dt);
    for (const auto& channel : control.values) out << ',' << format_double(channel[k]);
    out << '\n';
  }
}

ControlGrid read_pulse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open pulse file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("pulse file is empty: " + path);
  int channels = 0;
  if (header == "step_index,t_start,phi") {
    channels = 1;
  } else if (header == "step_index,t_start,phi12,phi23,phi31") {
    channels = 3;
  } else {
    throw std::runtime_error("pulse file has an unrecognized header: " + header);
  }

  std::vector<double> t_start;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> fields;
    while (std::getline(ls, cell, ',')) fields.push_back(std::stod(cell));
    if (static_cast<int>(fields.size()) != 2 + channels) {
      throw std::runtime_error("pulse file row has the wrong number of columns");
    }
    t_start.push_back(fields[1]);
    rows.push_back({fields.begin() + 2, fields.end()});
  }
  const int n_steps = static_cast<int>(rows.size());
  if (n_steps < 2) throw std::runtime_error("pulse file needs at least two steps");

  const double dt = t_start[1] - t_start[0];
  if (!(dt > 0.0)) throw std::runtime_error("pulse file t_start column must increase");
  for (int k = 1; k < n_steps; ++k) {
    if (std::abs(t_start[static_cast<std::size_t>(k)] - k * dt) > 1e-9 * n_steps) {
      throw std::runtime_error("pulse file t_start column is not uniformly spaced");
    }
  }

  ControlGrid control = make_control(dt * n_steps, n_steps, channels);
  for (int k = 0; k < n_steps; ++k) {
    for (int c = 0; c < channels; ++c) {
      control.values[static_cast<std::size_t>(c)][k] = rows[static_cast<std::size_t>(k)]
                                                           [static_cast<std::size_t>(c)];
    }
  }
  control.validate();
  return control;
}

void write_trace_csv(const std::string& path, const OptimizationResult& result) {
  auto out = open_for_write(path);
  out << "iteration,fidelity,grad_norm\n";
  for (std::size_t i = 0; i < result.fidelity_trace.size(); ++i) {
    out << i << ',' << format_double(result.fidelity_trace[i]) << ','
        << format_double(result.grad_norm_trace[i]) << '\n';
  }
}

void write_populations_csv(const std::string& path, const ComplexVector& psi) {
  auto out = open_for_write(path);
  out << "index,probability\n";
  for (int i = 0; i < psi.size(); ++i) {
    out << i << ',' << format_double(std::norm(psi[i])) << '\n';
  }
}

void write_populations_csv(const std::string& path, const ComplexVector& psi,
                           const Lattice2DParams& p) {
  if (psi.size() != p.dim()) throw std::invalid_argument("populations: dimension mismatch");
  auto out = open_for_write(path);
  out << "m,n,probability\n";
  for (int i = 0; i < psi.size(); ++i) {
    const auto [m, n] = unflatten(static_cast<int>(i), p);
    out << m << ',' << n << ',' << format_double(std::norm(psi[i])) << '\n';
  }
}

void write_timeseries_csv(const std::string& path, const std::vector<std::string>& columns,
                          const std::vector<double>& t,
                          const std::vector<std::vector<double>>& rows) {
  if (t.size() != rows.size()) throw std::invalid_argument("timeseries: ragged rows");
  auto out = open_for_write(path);
  out << "t";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (rows[i].size() != columns.size()) throw std::invalid_argument("timeseries: ragged rows");
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw std::invalid_argument("timeseries: time column must strictly increase");
    }
    out << format_double(t[i]);
    for (double v : rows[i]) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_for_write(path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string content_hash(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_manifest_json(const std::string& path, const std::string& config_text,
                         std::uint64_t seed) {
  nlohmann::json manifest;
  manifest["config_hash"] = content_hash(config_text);
  manifest["seed"] = seed;
  manifest["versions"]["latoc"] = "0.1.0";
  manifest["versions"]["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                                  std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION);
#if defined(__VERSION__)
  manifest["versions"]["compiler"] = __VERSION__;
#endif
  write_text_file(path, manifest.dump(2) + "\n");
}

}  // namespace latoc
