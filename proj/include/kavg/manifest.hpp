#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace kavg {

inline constexpr const char* kToolVersion = "kavg 0.1.0";

/// Manifest fields that legitimately differ between otherwise identical runs.
inline constexpr std::array<const char*, 3> kVolatileManifestFields{"started_at", "finished_at", "wall_time_s"};

struct RunManifest {
  std::string experiment;
  nlohmann::json config_echo;
  std::uint64_t master_seed = 0;
  std::string seed_source = "fixed";  // or "entropy"
  std::string tool_version = kToolVersion;
  std::string csv_file;
  std::size_t row_count = 0;
  std::chrono::system_clock::time_point started_at;
  std::chrono::system_clock::time_point finished_at;
};

/// ISO-8601 UTC with millisecond resolution.
std::string utc_timestamp(std::chrono::system_clock::time_point t);

nlohmann::json to_json(const RunManifest& manifest);
/// The manifest without its volatile fields.
nlohmann::json stable_part(nlohmann::json manifest);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace kavg
