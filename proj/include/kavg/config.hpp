#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "kavg/experiments.hpp"

namespace kavg {

// Experiment configs are flat JSON objects. Keys:
//   n_grid, k_grid        lists of integers >= 2
//   theta_grid            list of positive reals (theta-sweep)
//   a_grid                list of reals (cutoff)
//   epsilon               real in (0, 2) (mixing-time; optional)
//   replications          integer >= 1 (required)
//   master_seed           unsigned 64-bit integer (optional)
//   max_steps             integer >= 1 (optional)
// Any other key is rejected.

/// ConfigFileError if unreadable, ConfigSyntaxError on malformed JSON or a
/// wrongly typed value, ConfigValueError on a violated invariant.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Every field, including defaults, so the echo parses back to an equal config.
nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace kavg
