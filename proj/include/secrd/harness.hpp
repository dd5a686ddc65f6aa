#pragma once

#include <cstdint>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "secrd/adversary.hpp"
#include "secrd/exponents.hpp"
#include "secrd/grid_code.hpp"

namespace secrd {

inline constexpr int kReportSchemaVersion = 1;

enum class StrategyKind { honest, optimal, key_attack, fixed_key, blind };
std::string to_string(StrategyKind kind);
// Throws std::invalid_argument for an unknown name.
StrategyKind parse_strategy(const std::string& name);

struct EvalContext {
  DistortionMatrix d_e;
  LeniencyMap witness;
  AttackLimits limits;
};

// Exact exiguous-distortion probability; each ratio is kept as hits / cases.
struct ExactResult {
  double probability = 0.0;
  double log2_probability = 0.0;  // -inf when probability is 0
  std::uint64_t cases = 0;        // enumerated (source, key[, guess]) combinations
  bool exhaustive = true;         // false when the z-search fell back to candidates
};

ExactResult exact_exiguous_probability(const CipherSystem& system, StrategyKind strategy, double level,
                                       const EvalContext& ctx);

struct McResult {
  double probability = 0.0;
  double stderr_value = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::optional<double> upper_bound;  // one-sided 95% Clopper-Pearson bound when no successes
};

// Trial t draws its source block, key and guess from derive_seed(master_seed, stream, t).
McResult monte_carlo_exiguous(const CipherSystem& system, StrategyKind strategy, double level, std::uint64_t trials,
                              std::uint64_t master_seed, const EvalContext& ctx, unsigned threads = 1);

struct ExcessResult {
  double probability = 0.0;     // worst key
  std::size_t keys_evaluated = 0;
  bool keys_exhaustive = true;
  bool sources_exhaustive = true;
};

// Fraction of the system's source ensemble reproduced above d_c, worst key. Keys are exhaustive
// up to width 8, otherwise 256 keys drawn from the seed.
ExcessResult excess_distortion_probability(const CipherSystem& system, const DistortionMatrix& d_l, double d_c,
                                           std::uint64_t seed);

// Same event for a grid code under i.i.d. p. Each type class contributes P[T(Q)] times the
// fraction of its members (all, or `per_type` sampled ones) reproduced above d_c.
ExcessResult excess_distortion_probability(const GridCode& code, const Distribution& p, std::uint64_t seed,
                                           std::size_t keys = 16, std::size_t per_type = 64);

// Sum of P[T(Q)] over the types the grid code leaves uncovered.
double uncovered_type_probability(const GridCode& code, const Distribution& p);

struct SlopeFit {
  double slope = 0.0;  // bits per symbol of -log2 p against n
  double intercept = 0.0;
  double stderr_value = 0.0;
  double band_low = 0.0, band_high = 0.0;  // slope -/+ 2 stderr
  std::vector<int> excluded;               // n values dropped for zero probability
};

struct FitPoint {
  int n = 0;
  double log2_probability = 0.0;
};

// Least squares over rows with finite log2 probability. Throws std::invalid_argument when
// fewer than 3 distinct n remain.
SlopeFit fit_exponent(const std::vector<FitPoint>& rows);

struct ReverseMarkovCheck {
  double mean = 0.0;
  double lhs = 0.0;  // P(X > beta E[X])
  double rhs = 0.0;  // (1 - beta) / (alpha - beta)
  bool precondition = false;  // X > 0 and P(X <= alpha E[X]) = 1 with alpha > 1
  bool holds = false;
};
ReverseMarkovCheck reverse_markov_check(const std::vector<double>& values, const std::vector<double>& probs,
                                        double alpha, double beta);

struct TheoremConfig {
  Distribution p;
  DistortionMatrix d_l;
  DistortionMatrix d_e;
  double d_c = 0.0;
  double distortion = 0.0;
  double key_rate = 0.0;
  std::optional<double> r_c;
  std::vector<int> n_values;
  std::vector<StrategyKind> strategies{StrategyKind::optimal, StrategyKind::key_attack, StrategyKind::blind};
  double delta = 0.05;
  int max_retries = 16;
  std::uint64_t seed = 0;
  std::uint64_t mc_trials = 0;  // 0: exact rows only
  bool exact_rows = true;       // false: Monte Carlo rows only, slopes fitted on them
  unsigned threads = 1;
  AttackLimits limits;
  CoverOptions cover;
  SimplexSearch search;
  double window_below = 0.10;  // acceptance window around the predicted exponent
  double window_above = 0.15;
};

struct ReportRow {
  int n = 0;
  double distortion = 0.0;
  std::string strategy;
  std::string method;  // exact | mc
  double probability = 0.0;
  double log2_probability = 0.0;
  double stderr_value = 0.0;
  std::uint64_t trials = 0;
  std::optional<double> upper_bound;
  bool exhaustive = true;
  std::string recipe;
};

struct EvalReport {
  std::vector<ReportRow> rows;
  std::map<std::string, SlopeFit> slopes;  // per strategy, plus "best"
  double theorem_exponent = 0.0;
  double perfect_secrecy_exponent = 0.0;
  std::optional<double> marton_exponent;
  double key_rate = 0.0;
  double window_low = 0.0, window_high = 0.0;
  bool has_theory = false;
  bool passed = false;
  std::vector<std::string> stage_errors;
  nlohmann::json constructions = nlohmann::json::array();
  nlohmann::json config_echo;
  std::uint64_t seed = 0;
};

EvalReport theorem_report(const TheoremConfig& config);

// Stable 64-bit hash of the code construction recipe, hex encoded.
std::string recipe_hash(const TheoremConfig& config);

nlohmann::json report_json(const EvalReport& report);
std::string report_csv(const EvalReport& report);

// Output formats: rates and exponents with 6 decimals, probabilities with 6 significant digits.
std::string format_rate(double bits);
std::string format_probability(double p);

}  // namespace secrd
