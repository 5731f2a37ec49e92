#include "kavg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kavg/errors.hpp"

namespace kavg {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys{"n_grid",       "k_grid",      "theta_grid", "a_grid",   "epsilon",
                                       "replications", "master_seed", "max_steps"};

std::uint64_t as_unsigned(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    throw ConfigValueError(key + ": must be nonnegative (got " + v.dump() + ")", key);
  }
  throw ConfigSyntaxError(key + ": expected an integer, found " + std::string(v.type_name()), key);
}

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) {
    throw ConfigSyntaxError(key + ": expected a number, found " + std::string(v.type_name()), key);
  }
  return v.get<double>();
}

const json& as_list(const json& v, const std::string& key) {
  if (!v.is_array()) {
    throw ConfigSyntaxError(key + ": expected a list, found " + std::string(v.type_name()), key);
  }
  return v;
}

std::vector<std::size_t> size_list(const json& v, const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& e : as_list(v, key)) out.push_back(static_cast<std::size_t>(as_unsigned(e, key)));
  return out;
}

std::vector<double> real_list(const json& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& e : as_list(v, key)) out.push_back(as_real(e, key));
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigSyntaxError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKnownKeys.contains(key)) throw ConfigValueError("unknown key '" + key + "'", key);
  }
  for (const char* required : {"n_grid", "k_grid", "replications"}) {
    if (!j.contains(required)) {
      throw ConfigValueError(std::string("missing required key '") + required + "'", required);
    }
  }

  ExperimentConfig config;
  config.n_grid = size_list(j.at("n_grid"), "n_grid");
  config.k_grid = size_list(j.at("k_grid"), "k_grid");
  if (j.contains("theta_grid")) config.theta_grid = real_list(j.at("theta_grid"), "theta_grid");
  if (j.contains("a_grid")) config.a_grid = real_list(j.at("a_grid"), "a_grid");
  if (j.contains("epsilon") && !j.at("epsilon").is_null()) config.epsilon = as_real(j.at("epsilon"), "epsilon");
  config.replications = static_cast<std::size_t>(as_unsigned(j.at("replications"), "replications"));
  if (j.contains("master_seed")) config.master_seed = as_unsigned(j.at("master_seed"), "master_seed");
  if (j.contains("max_steps")) config.max_steps = as_unsigned(j.at("max_steps"), "max_steps");

  if (config.n_grid.empty()) throw ConfigValueError("n_grid must be nonempty", "n_grid");
  if (config.k_grid.empty()) throw ConfigValueError("k_grid must be nonempty", "k_grid");
  validate(config);
  return config;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigSyntaxError(std::string("malformed config: ") + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFileError("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["n_grid"] = config.n_grid;
  j["k_grid"] = config.k_grid;
  j["theta_grid"] = config.theta_grid;
  j["a_grid"] = config.a_grid;
  j["epsilon"] = config.epsilon ? json(*config.epsilon) : json(nullptr);
  j["replications"] = config.replications;
  j["master_seed"] = config.master_seed;
  j["max_steps"] = config.max_steps;
  return j;
}

}  // namespace kavg
