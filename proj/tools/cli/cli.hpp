#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lurelab::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2, kBlowUp = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kConfigVersion = 1;

// Everything a command needs; populated from --config and then from flags.
struct RunConfig {
  std::string command;
  std::string preset = "two-mass";
  std::string forcing = "v_p";
  std::optional<std::vector<double>> x0;
  std::optional<std::vector<double>> x0_ref;
  std::optional<double> horizon;
  std::optional<double> dt;
  std::optional<double> settle;
  std::uint64_t seed = 1;
  std::string out = "runs";
  std::optional<nlohmann::json> nonlinearity;
  std::vector<double> radii;
  // analyze
  std::optional<std::string> signal;
  std::optional<std::string> sampled;
  bool scan_periods = false;
  double epsilon = 0.1;
  std::optional<double> tau_max;
  std::optional<double> inclusion_length;
  std::vector<double> fourier;
  bool force = false;
  std::string verbosity = "normal";
};

// Validates the versioned schema and rejects unknown keys.
void apply_config_json(const nlohmann::json& j, RunConfig& cfg);
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base);

// "2pi", "2sqrt2pi", "sqrt2", "0.75", "pi/2" and plain numbers.
double parse_frequency(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);
std::vector<double> parse_frequency_list(const std::string& text);

// Resolves <out>, honouring LURELAB_OUT.
std::filesystem::path output_root(const RunConfig& cfg);

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lurelab::cli
