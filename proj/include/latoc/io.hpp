#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latoc/control.hpp"
#include "latoc/grape.hpp"
#include "latoc/lattice2d.hpp"
#include "latoc/types.hpp"

namespace latoc {

// all numeric CSV/JSON output uses 15 significant digits
std::string format_double(double x);

// pulse CSV: step_index,t_start,phi (one channel) or
// step_index,t_start,phi12,phi23,phi31 (three)
void write_pulse_csv(const std::string& path, const ControlGrid& control);
// reconstructs t_f from the t_start column spacing
ControlGrid read_pulse_csv(const std::string& path);

// trace CSV: iteration,fidelity,grad_norm
void write_trace_csv(const std::string& path, const OptimizationResult& result);

// populations CSV: index,probability or m,n,probability
void write_populations_csv(const std::string& path, const ComplexVector& psi);
void write_populations_csv(const std::string& path, const ComplexVector& psi,
                           const Lattice2DParams& p);

// time series CSV with a strictly increasing t column and named value columns
void write_timeseries_csv(const std::string& path, const std::vector<std::string>& columns,
                          const std::vector<double>& t,
                          const std::vector<std::vector<double>>& rows);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// stable 64-bit FNV-1a content hash, hex; keys run manifests
std::string content_hash(const std::string& text);

// manifest JSON: config hash, seed, library and compiler versions
void write_manifest_json(const std::string& path, const std::string& config_text,
                         std::uint64_t seed);

}  // namespace latoc
