#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace lurelab::cli {

namespace {

double number(const nlohmann::json& j, const char* key) {
  if (!j.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(number(e, key));
  return v;
}

std::string text(const nlohmann::json& j, const char* key) {
  if (!j.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return j.get<std::string>();
}

}  // namespace

void apply_config_json(const nlohmann::json& j, RunConfig& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{
      "version", "command", "preset",  "forcing", "x0",       "x0_ref",  "horizon",
      "dt",      "settle",  "seed",    "out",     "nonlinearity", "radii", "signal",
      "sampled", "scan_periods", "epsilon", "tau_max", "inclusion_length", "fourier", "force", "verbosity"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw ConfigError("unknown config key '" + k + "'");
  if (!j.contains("version")) throw ConfigError("config lacks 'version'");
  if (!j["version"].is_number_integer() || j["version"].get<int>() != kConfigVersion)
    throw ConfigError("unsupported config version (expected " + std::to_string(kConfigVersion) + ")");

  if (j.contains("command")) c.command = text(j["command"], "command");
  if (j.contains("preset")) c.preset = text(j["preset"], "preset");
  if (j.contains("forcing")) c.forcing = text(j["forcing"], "forcing");
  if (j.contains("x0")) c.x0 = numbers(j["x0"], "x0");
  if (j.contains("x0_ref")) c.x0_ref = numbers(j["x0_ref"], "x0_ref");
  if (j.contains("horizon")) c.horizon = number(j["horizon"], "horizon");
  if (j.contains("dt")) c.dt = number(j["dt"], "dt");
  if (j.contains("settle")) c.settle = number(j["settle"], "settle");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("out")) c.out = text(j["out"], "out");
  if (j.contains("nonlinearity")) c.nonlinearity = j["nonlinearity"];
  if (j.contains("radii")) c.radii = numbers(j["radii"], "radii");
  if (j.contains("signal")) c.signal = text(j["signal"], "signal");
  if (j.contains("sampled")) c.sampled = text(j["sampled"], "sampled");
  if (j.contains("scan_periods")) {
    if (!j["scan_periods"].is_boolean()) throw ConfigError("'scan_periods' must be a boolean");
    c.scan_periods = j["scan_periods"].get<bool>();
  }
  if (j.contains("epsilon")) c.epsilon = number(j["epsilon"], "epsilon");
  if (j.contains("tau_max")) c.tau_max = number(j["tau_max"], "tau_max");
  if (j.contains("inclusion_length")) c.inclusion_length = number(j["inclusion_length"], "inclusion_length");
  if (j.contains("fourier")) {
    const auto& f = j["fourier"];
    if (f.is_string()) {
      c.fourier = parse_frequency_list(f.get<std::string>());
    } else {
      c.fourier = numbers(f, "fourier");
    }
  }
  if (j.contains("force")) {
    if (!j["force"].is_boolean()) throw ConfigError("'force' must be a boolean");
    c.force = j["force"].get<bool>();
  }
  if (j.contains("verbosity")) {
    c.verbosity = text(j["verbosity"], "verbosity");
    if (c.verbosity != "quiet" && c.verbosity != "normal")
      throw ConfigError("'verbosity' must be \"quiet\" or \"normal\"");
  }
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
  apply_config_json(j, base);
  return base;
}

double parse_frequency(const std::string& raw) {
  static const std::regex re(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(?:sqrt\(?(\d+\.?\d*)\)?)?\s*\*?\s*(pi)?\s*(?:/\s*(\d+\.?\d*))?\s*$)");
  std::smatch m;
  if (raw.empty() || !std::regex_match(raw, m, re) || (!m[1].matched && !m[2].matched && !m[3].matched))
    throw ConfigError("cannot parse frequency '" + raw + "'");
  double v = m[1].matched ? std::stod(m[1].str()) : 1.0;
  if (m[2].matched) v *= std::sqrt(std::stod(m[2].str()));
  if (m[3].matched) v *= M_PI;
  if (m[4].matched) {
    const double d = std::stod(m[4].str());
    if (d == 0.0) throw ConfigError("division by zero in frequency '" + raw + "'");
    v /= d;
  }
  return v;
}

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + p + "'");
    }
    if (p.find_first_not_of(" \t", used) != std::string::npos) throw ConfigError("cannot parse number '" + p + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::vector<double> parse_frequency_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split(s)) out.push_back(parse_frequency(p));
  if (out.empty()) throw ConfigError("empty frequency list");
  return out;
}

std::filesystem::path output_root(const RunConfig& cfg) {
  if (const char* env = std::getenv("LURELAB_OUT"); env && *env) return env;
  return cfg.out;
}

}  // namespace lurelab::cli
