#pragma once

#include <json.hpp>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "secrd/harness.hpp"

namespace secrd {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SystemKind { single_type, xor_one_bit };

struct RunConfig {
  Distribution source;
  DistortionMatrix d_l;
  DistortionMatrix d_e;
  double d_c = 0.0;
  std::vector<double> distortions;
  std::vector<double> key_rates;
  std::optional<double> r_c;
  std::optional<double> excess_exponent;
  std::vector<int> n_values;
  std::optional<int> grid_n0;
  double grid_epsilon = 0.5;
  double delta = 0.05;
  std::vector<StrategyKind> strategies{StrategyKind::optimal, StrategyKind::key_attack, StrategyKind::blind};
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::optional<std::string> out;
  int points = 11;
  std::optional<std::uint64_t> mc_trials;
  int max_retries = 16;
  AttackLimits limits;
  EnumerationCap cap;
  SystemKind system = SystemKind::single_type;
  LeniencyMap witness = LeniencyMap::identity(2);
  nlohmann::json raw;  // the resolved document, echoed into outputs
};

inline const std::vector<std::string> kPresetNames{"xor1bit", "theorem"};

// Preset keys first, then the document's own keys on top. Throws ConfigError for an unknown preset.
nlohmann::json resolve_preset(const nlohmann::json& doc);

// Validates every field. Throws ConfigError naming the offending key or matrix cell.
RunConfig parse_run_config(const nlohmann::json& doc);

struct CommandIo {
  std::ostream& out;
  std::ostream& err;
};

inline const std::vector<std::string> kCommandNames{"rd", "exponents", "build-code", "attack", "simulate", "theorem"};

// Exit codes: 0 success, 1 configuration or construction error, 2 theorem verdict failed.
int run_command(const std::string& name, const nlohmann::json& doc, CommandIo io);

}  // namespace secrd
