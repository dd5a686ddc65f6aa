#include "secrd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "secrd/combinatorics.hpp"
#include "secrd/parallel.hpp"

namespace secrd {

namespace {

constexpr std::uint64_t kMcStream = 5;
constexpr std::uint64_t kExcessKeyStream = 6;
constexpr std::uint64_t kReportBookStream = 7;
constexpr std::uint64_t kReportCoverStream = 8;
constexpr std::uint64_t kReportMcStream = 9;
constexpr std::uint64_t kExcessSourceStream = 10;

double log2_ratio(double hits, double cases) {
  return hits <= 0.0 ? -kInfinity : std::log2(hits) - std::log2(cases);
}

void require_pairs(const CipherSystem& system, double multiplier, const AttackLimits& limits) {
  const double pairs = static_cast<double>(system.source_count()) * std::ldexp(1.0, system.key_width()) * multiplier;
  if (pairs > static_cast<double>(limits.max_pairs))
    throw CapExceeded("exact evaluation needs " + std::to_string(pairs) + " cases, limit " +
                          std::to_string(limits.max_pairs) + "; use Monte Carlo",
                      system.block_length(), static_cast<std::uint64_t>(std::min(pairs, 1.8e19)));
}

// Lowest word with the given counts.
Word sorted_word(const std::vector<int>& counts) {
  Word z;
  for (std::size_t s = 0; s < counts.size(); ++s) z.insert(z.end(), static_cast<std::size_t>(counts[s]), static_cast<Symbol>(s));
  return z;
}

// Blind guess against the system's source ensemble: one type class, or all of X^n.
Estimate blind_for_system(const CipherSystem& system, const EvalContext& ctx, double level) {
  if (auto q = system.source_type()) return blind_estimate(*q, ctx.d_e, level);
  const int n = system.block_length();
  const std::size_t xa = ctx.d_e.source_size(), za = ctx.d_e.repro_size();
  if (std::pow(static_cast<double>(xa), n) != static_cast<double>(system.source_count()))
    throw std::invalid_argument("blind evaluation needs a single type class or the full product space");
  const auto source_types = compositions(n, static_cast<int>(xa));
  Estimate best;
  double best_hits = -1.0;
  for (const auto& zc : compositions(n, static_cast<int>(za))) {
    double hits = 0.0;
    for (const auto& qc : source_types) hits += static_cast<double>(count_within(EmpiricalType(qc), zc, ctx.d_e, level));
    if (hits > best_hits) {  // compositions are in lexicographic order, sorted_word keeps the lowest z on ties
      best_hits = hits;
      best.z = sorted_word(zc);
    }
  }
  best.probability = best_hits / static_cast<double>(system.source_count());
  return best;
}

// Per-trial estimate of one strategy; prepared objects live for the whole evaluation.
struct StrategyRunner {
  const CipherSystem& system;
  const EvalContext& ctx;
  StrategyKind kind;
  double level;
  std::optional<OptimalAdversary> optimal;
  std::optional<Estimate> blind;
  KeyAttack attack;

  StrategyRunner(const CipherSystem& s, const EvalContext& c, StrategyKind k, double lv)
      : system(s), ctx(c), kind(k), level(lv), attack(s, c.witness) {
    if (kind == StrategyKind::optimal) optimal.emplace(system, ctx.d_e, level, ctx.witness, ctx.limits);
    if (kind == StrategyKind::blind) blind = blind_for_system(system, ctx, level);
  }

  Word estimate(const Cryptogram& y, std::uint64_t key, std::mt19937_64& rng) const {
    switch (kind) {
      case StrategyKind::honest: return ctx.witness.apply(system.decode(y, key));
      case StrategyKind::optimal: return optimal->estimate(y).z;
      case StrategyKind::key_attack: return attack.estimate(y, rng);
      case StrategyKind::fixed_key: return attack.estimate(y, 0);
      case StrategyKind::blind: return blind->z;
    }
    return {};
  }
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void fnv_mix(std::uint64_t& h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= 0xff;
  h *= 1099511628211ULL;
}

std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v, bool probability) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return std::stod(probability ? format_probability(v) : format_rate(v));
}

nlohmann::json matrix_json(const DistortionMatrix& d) { return d.to_rows(); }

}  // namespace

std::string to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::honest: return "honest";
    case StrategyKind::optimal: return "optimal";
    case StrategyKind::key_attack: return "key_attack";
    case StrategyKind::fixed_key: return "fixed_key";
    case StrategyKind::blind: return "blind";
  }
  return "unknown";
}

StrategyKind parse_strategy(const std::string& name) {
  for (auto k : {StrategyKind::honest, StrategyKind::optimal, StrategyKind::key_attack, StrategyKind::fixed_key,
                 StrategyKind::blind})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

ExactResult exact_exiguous_probability(const CipherSystem& system, StrategyKind strategy, double level,
                                       const EvalContext& ctx) {
  ExactResult out;
  const double sources = static_cast<double>(system.source_count());
  const double keys = std::ldexp(1.0, system.key_width());
  const int n = system.block_length();
  out.cases = static_cast<std::uint64_t>(sources * keys);
  switch (strategy) {
    case StrategyKind::optimal: {
      OptimalAdversary adv(system, ctx.d_e, level, ctx.witness, ctx.limits);
      out.probability = adv.success();
      out.log2_probability = out.probability > 0 ? std::log2(out.probability) : -kInfinity;
      out.exhaustive = adv.exhaustive();
      return out;
    }
    case StrategyKind::key_attack: {
      KeyAttack attack(system, ctx.witness);
      if (!system.key_enters_by_xor()) out.cases = static_cast<std::uint64_t>(sources * keys * keys);
      out.probability = attack.exact_success(ctx.d_e, level, ctx.limits);
      out.log2_probability = out.probability > 0 ? std::log2(out.probability) : -kInfinity;
      return out;
    }
    case StrategyKind::blind: {
      const Estimate e = blind_for_system(system, ctx, level);
      out.probability = e.probability;
      out.log2_probability = out.probability > 0 ? std::log2(out.probability) : -kInfinity;
      out.cases = system.source_count();
      return out;
    }
    case StrategyKind::honest:
    case StrategyKind::fixed_key: {
      require_pairs(system, 1.0, ctx.limits);
      StrategyRunner runner(system, ctx, strategy, level);
      std::mt19937_64 unused(0);
      std::uint64_t hits = 0;
      for (std::uint64_t i = 0; i < system.source_count(); ++i) {
        const Word x = system.source_block(i);
        for (std::uint64_t u = 0; u < (1ULL << system.key_width()); ++u)
          hits += within_distortion(total_distortion(x, runner.estimate(system.encode(x, u), u, unused), ctx.d_e), n,
                                    level);
      }
      out.probability = static_cast<double>(hits) / (sources * keys);
      out.log2_probability = log2_ratio(static_cast<double>(hits), sources * keys);
      return out;
    }
  }
  return out;
}

McResult monte_carlo_exiguous(const CipherSystem& system, StrategyKind strategy, double level, std::uint64_t trials,
                              std::uint64_t master_seed, const EvalContext& ctx, unsigned threads) {
  if (trials == 0) throw std::invalid_argument("Monte Carlo needs at least one trial");
  StrategyRunner runner(system, ctx, strategy, level);
  const int n = system.block_length();
  const std::uint64_t key_count = 1ULL << system.key_width();
  std::vector<unsigned char> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(master_seed, kMcStream, t));
    const std::uint64_t i = std::uniform_int_distribution<std::uint64_t>(0, system.source_count() - 1)(rng);
    const std::uint64_t u = std::uniform_int_distribution<std::uint64_t>(0, key_count - 1)(rng);
    const Word x = system.source_block(i);
    const Word z = runner.estimate(system.encode(x, u), u, rng);
    hit[t] = within_distortion(total_distortion(x, z, ctx.d_e), n, level);
  });
  McResult out;
  out.trials = trials;
  for (unsigned char h : hit) out.successes += h;
  const double p = static_cast<double>(out.successes) / static_cast<double>(trials);
  out.probability = p;
  out.stderr_value = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  if (out.successes == 0) out.upper_bound = 1.0 - std::pow(0.05, 1.0 / static_cast<double>(trials));
  return out;
}

ExcessResult excess_distortion_probability(const CipherSystem& system, const DistortionMatrix& d_l, double d_c,
                                           std::uint64_t seed) {
  ExcessResult out;
  const int width = system.key_width();
  std::vector<std::uint64_t> keys;
  if (width <= 8) {
    for (std::uint64_t u = 0; u < (1ULL << width); ++u) keys.push_back(u);
  } else {
    out.keys_exhaustive = false;
    std::mt19937_64 rng(derive_seed(seed, kExcessKeyStream));
    std::uniform_int_distribution<std::uint64_t> pick(0, (width >= 64 ? ~0ULL : (1ULL << width) - 1));
    for (int j = 0; j < 256; ++j) keys.push_back(pick(rng));
  }
  const int n = system.block_length();
  for (std::uint64_t u : keys) {
    std::uint64_t bad = 0;
    for (std::uint64_t i = 0; i < system.source_count(); ++i) {
      const Word x = system.source_block(i);
      bad += !within_distortion(total_distortion(x, system.decode(system.encode(x, u), u), d_l), n, d_c);
    }
    out.probability = std::max(out.probability, static_cast<double>(bad) / static_cast<double>(system.source_count()));
  }
  out.keys_evaluated = keys.size();
  return out;
}

ExcessResult excess_distortion_probability(const GridCode& code, const Distribution& p, std::uint64_t seed,
                                           std::size_t keys, std::size_t per_type) {
  if (keys == 0 || per_type == 0) throw std::invalid_argument("need at least one key and one source per type");
  const GridConfig& cfg = code.config();
  const int n = cfg.n;
  ExcessResult out;
  out.keys_exhaustive = false;
  out.keys_evaluated = keys;
  std::vector<double> per_key(keys, 0.0);
  for (std::size_t raw = 0; raw < code.raw_types().size(); ++raw) {
    const EmpiricalType q(code.raw_types()[raw]);
    const double weight = type_probability(q, p);
    if (weight == 0.0) continue;
    const TypeClass cls(q);
    std::vector<Word> sources;
    if (cls.size() <= per_type) {
      cls.for_each([&](std::uint64_t, const Word& x) { sources.push_back(x); }, EnumerationCap{64, per_type});
    } else {
      out.sources_exhaustive = false;
      std::mt19937_64 rng(derive_seed(seed, kExcessSourceStream, raw));
      std::uniform_int_distribution<std::uint64_t> pick(0, cls.size() - 1);
      for (std::size_t j = 0; j < per_type; ++j) sources.push_back(cls.unrank(pick(rng)));
    }
    for (std::size_t j = 0; j < keys; ++j) {
      std::size_t bad = 0;
      for (std::size_t s = 0; s < sources.size(); ++s) {
        // One key stream per (key, source) pair; the decoder replays the encoder's stream.
        const std::uint64_t stream_seed = derive_seed(seed, kExcessKeyStream, j);
        KeyStream enc(stream_seed), dec(stream_seed);
        const Word w = code.decode(code.encode(sources[s], enc), dec);
        bad += !within_distortion(total_distortion(sources[s], w, cfg.d_l), n, cfg.d_c);
      }
      per_key[j] += weight * static_cast<double>(bad) / static_cast<double>(sources.size());
    }
  }
  out.probability = *std::max_element(per_key.begin(), per_key.end());
  return out;
}

double uncovered_type_probability(const GridCode& code, const Distribution& p) {
  double total = 0.0;
  for (std::size_t raw = 0; raw < code.raw_types().size(); ++raw)
    if (!code.covered(raw)) total += type_probability(EmpiricalType(code.raw_types()[raw]), p);
  return total;
}

SlopeFit fit_exponent(const std::vector<FitPoint>& rows) {
  SlopeFit fit;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) {
    if (std::isfinite(r.log2_probability))
      pts.emplace_back(r.n, -r.log2_probability);
    else
      fit.excluded.push_back(r.n);
  }
  std::set<double> distinct;
  for (auto& [x, y] : pts) distinct.insert(x);
  if (distinct.size() < 3)
    throw std::invalid_argument("slope fit needs at least 3 distinct block lengths with nonzero probability, have " +
                                std::to_string(distinct.size()));
  const double m = static_cast<double>(pts.size());
  double sx = 0, sy = 0;
  for (auto& [x, y] : pts) sx += x, sy += y;
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) sxx += (x - mx) * (x - mx), sxy += (x - mx) * (y - my);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0;
  for (auto& [x, y] : pts) {
    const double r = y - (fit.intercept + fit.slope * x);
    ssr += r * r;
  }
  fit.stderr_value = std::sqrt(ssr / (m - 2.0) / sxx);
  fit.band_low = fit.slope - 2.0 * fit.stderr_value;
  fit.band_high = fit.slope + 2.0 * fit.stderr_value;
  return fit;
}

ReverseMarkovCheck reverse_markov_check(const std::vector<double>& values, const std::vector<double>& probs,
                                        double alpha, double beta) {
  if (values.size() != probs.size() || values.empty()) throw std::invalid_argument("values and probabilities differ in size");
  ReverseMarkovCheck c;
  for (std::size_t i = 0; i < values.size(); ++i) c.mean += values[i] * probs[i];
  const double tol = 1e-12 * std::max(1.0, std::abs(c.mean));
  c.precondition = alpha > 1.0 && beta >= 0.0 && beta < alpha;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    c.precondition = c.precondition && values[i] > 0.0 && values[i] <= alpha * c.mean + tol;
    if (values[i] > beta * c.mean) c.lhs += probs[i];
  }
  c.rhs = (1.0 - beta) / (alpha - beta);
  c.holds = c.lhs + 1e-12 >= c.rhs;
  return c;
}

std::string format_rate(double bits) {
  if (std::isinf(bits)) return bits > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", bits);
  return buf;
}

std::string format_probability(double p) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.5e", p);
  return buf;
}

std::string recipe_hash(const TheoremConfig& c) {
  std::uint64_t h = 14695981039346656037ULL;
  fnv_mix(h, "single-type");
  for (double v : c.p.probs()) fnv_mix(h, number_text(v));
  for (double v : c.d_l.values()) fnv_mix(h, number_text(v));
  for (double v : c.d_e.values()) fnv_mix(h, number_text(v));
  for (double v : {c.d_c, c.distortion, c.key_rate, c.delta}) fnv_mix(h, number_text(v));
  fnv_mix(h, std::to_string(c.max_retries));
  fnv_mix(h, std::to_string(c.cover.random_candidates) + "/" + std::to_string(c.cover.heuristic_candidates) + "/" +
                 std::to_string(c.cover.prune_redundant));
  fnv_mix(h, std::to_string(c.seed));
  return hex64(h);
}

EvalReport theorem_report(const TheoremConfig& config) {
  EvalReport report;
  report.seed = config.seed;
  report.key_rate = config.key_rate;
  const std::string recipe = recipe_hash(config);
  EvalContext ctx{config.d_e, LeniencyMap(config.d_e, config.d_l), config.limits};

  std::vector<int> ns = config.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::map<std::string, std::vector<FitPoint>> fit_rows;
  for (int n : ns) {
    try {
      CodebookRequest req;
      req.source_type = nearest_type(config.p, n);
      req.key_rate = config.key_rate;
      req.d_l = config.d_l;
      req.d_c = config.d_c;
      req.d_e = config.d_e;
      req.probe_distortions = {config.distortion};
      req.delta = config.delta;
      req.seed = derive_seed(config.seed, kReportBookStream, static_cast<std::uint64_t>(n));
      req.max_retries = config.max_retries;
      req.exhaustive_bits = config.limits.exhaustive_bits;
      PackingCodebook book = select_packing_codebook_or_best(req);
      const SingleTypeCode code = build_single_type_code(
          book, config.d_l, config.d_c, derive_seed(config.seed, kReportCoverStream, static_cast<std::uint64_t>(n)),
          config.cover);
      const SingleTypeSystem system(code);
      const auto& cb = code.codebook();

      nlohmann::json construction{{"n", n},
                                  {"source_type", cb.source_type.counts},
                                  {"key_width", cb.key_width},
                                  {"codewords", cb.codewords.size()},
                                  {"full_cover", cb.full_cover},
                                  {"cover_size", cb.cover.size()},
                                  {"cover_log2", json_number(std::log2(std::max<double>(1, cb.cover.size())), false)},
                                  {"cover_target_log2", json_number(cb.cover_target_log2, false)},
                                  {"disjoint", cb.disjoint()},
                                  {"invariants_passed", cb.invariants_passed()},
                                  {"invariants_hold", cb.invariants_hold()},
                                  {"attempts", cb.attempts},
                                  {"permutations", code.cover().permutations.size()},
                                  {"recipe", recipe}};
      report.constructions.push_back(construction);

      double best = -1.0;
      bool best_exhaustive = true;
      std::uint64_t best_cases = 0;
      for (StrategyKind kind : config.exact_rows ? config.strategies : std::vector<StrategyKind>{}) {
        const ExactResult r = exact_exiguous_probability(system, kind, config.distortion, ctx);
        report.rows.push_back(ReportRow{n, config.distortion, to_string(kind), "exact", r.probability, r.log2_probability, 0.0, r.cases,
                                        std::nullopt, r.exhaustive, recipe});
        fit_rows[to_string(kind)].push_back({n, r.log2_probability});
        if (kind != StrategyKind::honest && r.probability > best) {
          best = r.probability;
          best_exhaustive = r.exhaustive;
          best_cases = r.cases;
        }
      }
      if (best >= 0.0 && config.exact_rows) {
        const double lg = best > 0 ? std::log2(best) : -kInfinity;
        report.rows.push_back(
            ReportRow{n, config.distortion, "best", "exact", best, lg, 0.0, best_cases, std::nullopt, best_exhaustive, recipe});
        fit_rows["best"].push_back({n, lg});
      }
      if (config.mc_trials > 0) {
        for (std::size_t s = 0; s < config.strategies.size(); ++s) {
          const StrategyKind kind = config.strategies[s];
          const McResult m = monte_carlo_exiguous(
              system, kind, config.distortion, config.mc_trials,
              derive_seed(config.seed, kReportMcStream, static_cast<std::uint64_t>(n) * 16 + s), ctx, config.threads);
          const double lg = m.probability > 0 ? std::log2(m.probability) : -kInfinity;
          report.rows.push_back(ReportRow{n, config.distortion, to_string(kind), "mc", m.probability, lg,
                                          m.stderr_value, m.trials, m.upper_bound, true, recipe});
          if (!config.exact_rows) fit_rows[to_string(kind)].push_back({n, lg});
          if (!config.exact_rows && kind != StrategyKind::honest && m.probability > best) best = m.probability;
        }
        if (!config.exact_rows && best >= 0.0) fit_rows["best"].push_back({n, best > 0 ? std::log2(best) : -kInfinity});
      }
    } catch (const std::exception& e) {
      report.stage_errors.push_back("n=" + std::to_string(n) + ": " + e.what());
    }
  }

  for (const auto& [name, rows] : fit_rows) {
    try {
      report.slopes[name] = fit_exponent(rows);
    } catch (const std::exception& e) {
      report.stage_errors.push_back("fit " + name + ": " + e.what());
    }
  }

  report.has_theory = true;
  report.perfect_secrecy_exponent = perfect_secrecy_exponent(config.p, config.d_e, config.distortion, config.search).value;
  report.theorem_exponent = std::min(config.key_rate, report.perfect_secrecy_exponent);
  if (config.r_c) report.marton_exponent = marton_exponent(config.p, config.d_l, config.d_c, *config.r_c, config.search).value;
  report.window_low = report.theorem_exponent - config.window_below;
  report.window_high = report.theorem_exponent + config.window_above;
  const auto best = report.slopes.find("best");
  report.passed = best != report.slopes.end() && best->second.slope >= report.window_low &&
                  best->second.slope <= report.window_high;

  std::vector<std::string> strategy_names;
  for (auto k : config.strategies) strategy_names.push_back(to_string(k));
  report.config_echo = {{"p", config.p.probs()},
                        {"d_l", matrix_json(config.d_l)},
                        {"d_e", matrix_json(config.d_e)},
                        {"d_c", config.d_c},
                        {"distortion", config.distortion},
                        {"key_rate", config.key_rate},
                        {"n_values", ns},
                        {"strategies", strategy_names},
                        {"delta", config.delta},
                        {"max_retries", config.max_retries},
                        {"mc_trials", config.mc_trials},
                        {"exact_rows", config.exact_rows},
                        {"leniency_witness", ctx.witness.table()}};
  if (config.r_c) report.config_echo["r_c"] = *config.r_c;
  return report;
}

nlohmann::json report_json(const EvalReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j{{"n", row.n},
                     {"distortion", json_number(row.distortion, false)},
                     {"strategy", row.strategy},
                     {"method", row.method},
                     {"probability", json_number(row.probability, true)},
                     {"log2_probability", json_number(row.log2_probability, false)},
                     {"stderr", json_number(row.stderr_value, true)},
                     {"trials", row.trials},
                     {"exhaustive", row.exhaustive},
                     {"recipe", row.recipe}};
    if (row.upper_bound) j["upper_bound"] = json_number(*row.upper_bound, true);
    rows.push_back(j);
  }
  nlohmann::json slopes = nlohmann::json::object();
  for (const auto& [name, f] : r.slopes)
    slopes[name] = {{"slope", json_number(f.slope, false)},
                    {"intercept", json_number(f.intercept, false)},
                    {"stderr", json_number(f.stderr_value, false)},
                    {"band", {json_number(f.band_low, false), json_number(f.band_high, false)}},
                    {"excluded_n", f.excluded}};
  nlohmann::json out{{"schema", kReportSchemaVersion},
                     {"seed", r.seed},
                     {"config", r.config_echo},
                     {"constructions", r.constructions},
                     {"rows", rows},
                     {"slopes", slopes},
                     {"stage_errors", r.stage_errors}};
  if (!r.has_theory) return out;
  nlohmann::json theory{{"theorem_exponent", json_number(r.theorem_exponent, false)},
                        {"perfect_secrecy_exponent", json_number(r.perfect_secrecy_exponent, false)},
                        {"key_rate", json_number(r.key_rate, false)}};
  theory["marton_exponent"] = r.marton_exponent ? json_number(*r.marton_exponent, false) : nlohmann::json(nullptr);
  out["theory"] = theory;
  out["window"] = {json_number(r.window_low, false), json_number(r.window_high, false)};
  out["passed"] = r.passed;
  return out;
}

std::string report_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "# secrd-report schema " << kReportSchemaVersion << " seed=" << r.seed << "\n";
  out << "n,distortion,strategy,method,probability,log2_probability,stderr,trials,upper_bound,exhaustive,recipe\n";
  for (const auto& row : r.rows) {
    out << row.n << ',' << format_rate(row.distortion) << ',' << row.strategy << ',' << row.method << ',' << format_probability(row.probability) << ','
        << format_rate(row.log2_probability) << ',' << format_probability(row.stderr_value) << ',' << row.trials << ','
        << (row.upper_bound ? format_probability(*row.upper_bound) : "") << ',' << (row.exhaustive ? 1 : 0) << ','
        << row.recipe << '\n';
  }
  return out.str();
}

}  // namespace secrd
