#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "latoc/config.hpp"

namespace latoc {

// exit codes shared by the runners and the CLI wrapper
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitBelowGoal = 3;

// runners execute one experiment and persist artifacts (plus a manifest) into
// config.output_dir; seed_override takes precedence over the config seed
int run_propagate(const RunConfig& config, const std::string& config_text,
                  std::optional<std::uint64_t> seed_override = {});
int run_optimize(const RunConfig& config, const std::string& config_text,
                 std::optional<std::uint64_t> seed_override = {});
int run_beta_scan(const RunConfig& config, const std::string& config_text,
                  std::optional<std::uint64_t> seed_override = {});

}  // namespace latoc
