#include "kavg/manifest.hpp"

#include <ctime>
#include <fstream>

#include "kavg/errors.hpp"

namespace kavg {

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  const auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count() % 1000;
  const std::time_t secs = system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["experiment"] = m.experiment;
  j["config"] = m.config_echo;
  j["master_seed"] = m.master_seed;
  j["seed_source"] = m.seed_source;
  j["tool_version"] = m.tool_version;
  j["csv_file"] = m.csv_file;
  j["row_count"] = m.row_count;
  j["started_at"] = utc_timestamp(m.started_at);
  j["finished_at"] = utc_timestamp(m.finished_at);
  j["wall_time_s"] = std::chrono::duration<double>(m.finished_at - m.started_at).count();
  return j;
}

nlohmann::json stable_part(nlohmann::json manifest) {
  for (const char* key : kVolatileManifestFields) manifest.erase(key);
  return manifest;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace kavg
