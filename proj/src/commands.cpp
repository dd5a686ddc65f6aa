#include "secrd/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "secrd/artifact.hpp"
#include "secrd/combinatorics.hpp"
#include "secrd/parallel.hpp"

namespace secrd {

namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys{
    "preset", "system",     "source",  "d_l",     "d_e",        "d_c",         "distortion", "key_rate",
    "r_c",    "excess_exponent", "n",  "grid",    "delta",      "strategies",  "seed",       "threads",
    "out",    "points",     "mc_trials", "max_retries", "exhaustive_bits", "max_pairs", "cap"};

constexpr std::uint64_t kCoverStream = 8;
constexpr std::uint64_t kBookStream = 7;
constexpr std::uint64_t kMcStream = 9;

json preset_document(const std::string& name) {
  if (name == "xor1bit")
    return {{"system", "xor1bit"},
            {"source", {0.5, 0.5}},
            {"d_l", "hamming"},
            {"d_e", "hamming"},
            {"d_c", 0.0},
            {"distortion", {0.0, 0.1, 0.25, 0.49}},
            {"n", {4, 8, 12, 16}},
            {"strategies", {"key_attack", "fixed_key"}}};
  if (name == "theorem")
    return {{"system", "single_type"},
            {"source", {0.5, 0.5}},
            {"d_l", "hamming"},
            {"d_e", "hamming"},
            {"d_c", 0.125},
            {"distortion", 0.125},
            {"key_rate", 0.25},
            {"n", {8, 10, 12}},
            {"strategies", {"optimal", "key_attack", "blind"}}};
  throw ConfigError("unknown preset '" + name + "'");
}

double number_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number()) throw ConfigError(key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key + " must be finite");
  return d;
}

std::uint64_t unsigned_at(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(key + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  std::vector<double> out;
  if (v.is_number()) return {number_at(doc, key)};
  if (!v.is_array() || v.empty()) throw ConfigError(key + " must be a number or a nonempty list of numbers");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ConfigError(key + "[" + std::to_string(i) + "] must be a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

DistortionMatrix matrix_at(const json& doc, const std::string& key, std::size_t alphabet) {
  const json& v = doc.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() != "hamming") throw ConfigError(key + ": unknown named matrix '" + v.get<std::string>() + "'");
    return DistortionMatrix::hamming(alphabet);
  }
  if (!v.is_array() || v.size() != alphabet)
    throw ConfigError(key + " must be \"hamming\" or a list of " + std::to_string(alphabet) + " rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_array() || v[i].empty() || (i > 0 && v[i].size() != v[0].size()))
      throw ConfigError(key + "[" + std::to_string(i) + "] must be a row as long as the first");
    std::vector<double> row;
    for (std::size_t j = 0; j < v[i].size(); ++j) {
      const std::string cell = key + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (!v[i][j].is_number()) throw ConfigError(cell + " must be a number");
      const double d = v[i][j].get<double>();
      if (!std::isfinite(d)) throw ConfigError(cell + " must be finite");
      if (d < 0) throw ConfigError(cell + " is negative (" + std::to_string(d) + ")");
      row.push_back(d);
    }
    rows.push_back(std::move(row));
  }
  try {
    return DistortionMatrix(rows);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}


void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ConfigError("failed writing " + path);
}

std::uint64_t require_seed(const RunConfig& c, const std::string& command) {
  if (!c.seed) throw ConfigError(command + " is stochastic and needs a seed (config key \"seed\" or --seed)");
  return *c.seed;
}

int single_n(const RunConfig& c, const std::string& command) {
  if (c.n_values.size() != 1) throw ConfigError(command + " needs exactly one block length in \"n\"");
  return c.n_values.front();
}

double single_value(const std::vector<double>& v, const std::string& key, const std::string& command) {
  if (v.size() != 1) throw ConfigError(command + " needs exactly one value in \"" + key + "\"");
  return v.front();
}

SimplexSearch search_for(const RunConfig& c) {
  SimplexSearch s;
  s.threads = c.threads;
  return s;
}

std::string joined(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

void emit_report(const RunConfig& c, EvalReport report, CommandIo io) {
  report.config_echo["input"] = c.raw;
  if (c.out) {
    write_file(*c.out + ".json", report_json(report).dump(2) + "\n");
    write_file(*c.out + ".csv", report_csv(report));
    io.err << "wrote " << *c.out << ".json and " << *c.out << ".csv\n";
  } else {
    io.out << report_csv(report);
  }
}

TheoremConfig theorem_config(const RunConfig& c, const std::string& command) {
  TheoremConfig t;
  t.p = c.source;
  t.d_l = c.d_l;
  t.d_e = c.d_e;
  t.d_c = c.d_c;
  t.distortion = single_value(c.distortions, "distortion", command);
  t.key_rate = single_value(c.key_rates, "key_rate", command);
  t.r_c = c.r_c;
  t.n_values = c.n_values;
  t.strategies = c.strategies;
  t.delta = c.delta;
  t.max_retries = c.max_retries;
  t.seed = require_seed(c, command);
  t.threads = c.threads;
  t.limits = c.limits;
  t.cover.cap = c.cap;
  t.search = search_for(c);
  return t;
}

// Rows for the one-key-bit XOR system, one per (n, D, strategy).
EvalReport xor_report(const RunConfig& c, bool monte_carlo) {
  EvalReport report;
  const EvalContext ctx{c.d_e, c.witness, c.limits};
  std::uint64_t cell = 0;
  if (monte_carlo) report.seed = require_seed(c, "simulate");
  for (int n : c.n_values) {
    if (n < 1 || n > 24) throw ConfigError("xor1bit block length " + std::to_string(n) + " outside [1, 24]");
    const XorOneBitCode sys(n);
    for (double d : c.distortions)
      for (StrategyKind kind : c.strategies) {
        if (monte_carlo) {
          const std::uint64_t trials = c.mc_trials.value_or(10000);
          const McResult m = monte_carlo_exiguous(sys, kind, d, trials, derive_seed(report.seed, kMcStream, cell++), ctx,
                                                  c.threads);
          report.rows.push_back(ReportRow{n, d, to_string(kind), "mc", m.probability,
                                          m.probability > 0 ? std::log2(m.probability) : -kInfinity, m.stderr_value,
                                          m.trials, m.upper_bound, true, "xor1bit"});
        } else {
          const ExactResult r = exact_exiguous_probability(sys, kind, d, ctx);
          report.rows.push_back(ReportRow{n, d, to_string(kind), "exact", r.probability, r.log2_probability, 0.0,
                                          r.cases, std::nullopt, r.exhaustive, "xor1bit"});
        }
      }
  }
  report.config_echo = {{"leniency_witness", c.witness.table()}};
  return report;
}

int cmd_rd(const RunConfig& c, CommandIo io) {
  if (c.points < 2) throw ConfigError("points must be at least 2");
  std::ostringstream csv;
  csv << "# secrd-rd schema " << kReportSchemaVersion << "\n";
  csv << "distortion,rate_bits,tol\n";
  for (const RdPoint& pt : rd_curve(c.source, c.d_l, c.points))
    csv << format_rate(pt.distortion) << ',' << format_rate(pt.rate) << ',' << format_probability(pt.tolerance) << '\n';
  if (c.out) {
    write_file(*c.out + ".csv", csv.str());
  } else {
    io.out << csv.str();
  }
  return 0;
}

int cmd_exponents(const RunConfig& c, CommandIo io) {
  if (c.distortions.empty()) throw ConfigError("exponents needs \"distortion\"");
  const SimplexSearch search = search_for(c);
  auto value = [](double v) -> json { return std::isinf(v) ? json(v > 0 ? "inf" : "-inf") : json(std::stod(format_rate(v))); };
  json doc{{"schema", kReportSchemaVersion}};
  json secrecy = json::array(), theorem = json::array();
  for (double d : c.distortions) {
    const ExponentResult e = perfect_secrecy_exponent(c.source, c.d_e, d, search);
    secrecy.push_back({{"distortion", value(d)}, {"value", value(e.value)}});
    for (double r : c.key_rates)
      theorem.push_back({{"key_rate", value(r)}, {"distortion", value(d)}, {"value", value(std::min(r, e.value))}});
  }
  doc["perfect_secrecy"] = secrecy;
  if (!c.key_rates.empty()) doc["theorem"] = theorem;
  if (c.r_c) {
    const ExponentResult m = marton_exponent(c.source, c.d_l, c.d_c, *c.r_c, search);
    doc["marton"] = {{"d_c", value(c.d_c)}, {"r_c", value(*c.r_c)}, {"value", value(m.value)}};
  }
  const std::string text = doc.dump(2) + "\n";
  if (c.out) {
    write_file(*c.out + ".json", text);
  } else {
    io.out << text;
  }
  return 0;
}

void log_codebook(std::ostream& log, const SingleTypeCode& code, double delta) {
  const PackingCodebook& b = code.codebook();
  const PermutationCover& cov = code.cover();
  log << "source type (" << joined(b.source_type.counts) << "), n " << code.length() << ", key width " << b.key_width
      << ", codewords " << b.codewords.size() << ", codeword type (" << joined(b.codeword_type.counts) << ")\n";
  log << "  d-cover size " << b.cover.size() << " (log2 " << format_rate(std::log2(std::max<double>(1, b.cover.size())))
      << "), target n(E0 - " << format_rate(delta) << ") = " << format_rate(b.cover_target_log2) << " bits, "
      << (b.cover_passed ? "met" : "not met") << (b.full_cover ? ", full cover" : "") << "\n";
  log << "  packing invariants " << b.invariants_passed() << "/" << (1 + b.probes.size()) << " passed, "
      << (b.disjoint() ? "disjoint" : "overlapping") << ", attempts " << b.attempts << "\n";
  for (const ProbeCheck& p : b.probes)
    log << "  probe D=" << format_rate(p.distortion) << ": max count " << p.max_count << ", ratio "
        << format_probability(p.ratio) << ", bound " << format_probability(p.bound)
        << (p.exhaustive ? "" : " (candidate search)") << (p.passed ? ", passed" : ", failed") << "\n";
  log << "  permutations " << cov.count() << ", lower bound " << format_rate(cov.lower_bound()) << ", covering bound "
      << format_rate(cov.covering_bound()) << "\n";
}

int cmd_build_code(const RunConfig& c, CommandIo io) {
  const std::uint64_t seed = require_seed(c, "build-code");
  if (!c.out) throw ConfigError("build-code needs an output path (config key \"out\" or --out)");
  if (c.system != SystemKind::single_type) throw ConfigError("build-code constructs single-type and grid codes only");
  const int n = single_n(c, "build-code");
  const double key_rate = single_value(c.key_rates, "key_rate", "build-code");
  std::vector<double> probes = c.distortions.empty() ? std::vector<double>{c.d_c} : c.distortions;
  json params = c.raw;
  params["seed"] = seed;
  std::ostringstream log;
  std::string artifact;
  if (c.grid_n0) {
    GridConfig g;
    g.n0 = *c.grid_n0;
    g.epsilon = c.grid_epsilon;
    g.n = n;
    g.key_rate = key_rate;
    g.d_l = c.d_l;
    g.d_c = c.d_c;
    g.d_e = c.d_e;
    g.r_c = c.r_c.value_or(std::log2(static_cast<double>(c.source.size())));
    g.delta = c.delta;
    g.probe_distortions = probes;
    g.seed = seed;
    g.max_retries = c.max_retries;
    g.cover.cap = c.cap;
    g.cap = c.cap;
    g.threads = c.threads;
    const GridCode code = build_grid_code(g);
    std::size_t uncovered = 0;
    for (std::size_t raw = 0; raw < code.raw_types().size(); ++raw) uncovered += !code.covered(raw);
    log << "grid code: n " << n << ", truncated " << code.truncated_length() << ", n0 " << g.n0 << ", epsilon "
        << format_rate(g.epsilon) << ", ball size " << code.ball().size() << "\n";
    log << "types " << code.raw_types().size() << ", uncovered " << uncovered << " at R_c " << format_rate(g.r_c)
        << ", max key bits " << code.max_key_bits() << ", max cryptogram bits " << code.max_cryptogram_bits() << "\n";
    for (std::size_t i = 0; i < code.grid().size(); ++i) {
      log << "grid type " << i << ": ";
      if (code.grid_code(i))
        log_codebook(log, *code.grid_code(i), g.delta);
      else
        log << "unused\n";
    }
    artifact = grid_artifact(code, params);
  } else {
    CodebookRequest req;
    req.source_type = nearest_type(c.source, n);
    req.key_rate = key_rate;
    req.d_l = c.d_l;
    req.d_c = c.d_c;
    req.d_e = c.d_e;
    req.probe_distortions = probes;
    req.delta = c.delta;
    req.seed = derive_seed(seed, kBookStream, static_cast<std::uint64_t>(n));
    req.max_retries = c.max_retries;
    req.cap = c.cap;
    req.exhaustive_bits = c.limits.exhaustive_bits;
    CoverOptions cover;
    cover.cap = c.cap;
    const SingleTypeCode code = build_single_type_code(select_packing_codebook_or_best(req), c.d_l, c.d_c,
                                                       derive_seed(seed, kCoverStream, static_cast<std::uint64_t>(n)),
                                                       cover);
    log << "single-type code: ";
    log_codebook(log, code, c.delta);
    artifact = single_type_artifact(code, params);
  }
  log << "seed " << seed << ", artifact " << artifact.size() << " bytes\n";
  write_file(*c.out + ".bin", artifact);
  write_file(*c.out + ".log", log.str());
  io.out << log.str();
  io.err << "wrote " << *c.out << ".bin and " << *c.out << ".log\n";
  return 0;
}

int cmd_attack(const RunConfig& c, CommandIo io) {
  if (c.distortions.empty()) throw ConfigError("attack needs \"distortion\"");
  if (c.system == SystemKind::xor_one_bit) {
    emit_report(c, xor_report(c, false), io);
    return 0;
  }
  emit_report(c, theorem_report(theorem_config(c, "attack")), io);
  return 0;
}

int cmd_simulate(const RunConfig& c, CommandIo io) {
  if (c.distortions.empty()) throw ConfigError("simulate needs \"distortion\"");
  if (c.system == SystemKind::xor_one_bit) {
    emit_report(c, xor_report(c, true), io);
    return 0;
  }
  TheoremConfig t = theorem_config(c, "simulate");
  t.exact_rows = false;
  t.mc_trials = c.mc_trials.value_or(10000);
  emit_report(c, theorem_report(t), io);
  return 0;
}

int cmd_theorem(const RunConfig& c, CommandIo io) {
  if (c.system != SystemKind::single_type) throw ConfigError("theorem runs on single-type codes only");
  TheoremConfig t = theorem_config(c, "theorem");
  t.mc_trials = c.mc_trials.value_or(0);
  const EvalReport report = theorem_report(t);
  for (const auto& e : report.stage_errors) io.err << "stage error: " << e << "\n";
  const auto best = report.slopes.find("best");
  io.err << "best-adversary slope "
         << (best == report.slopes.end() ? std::string("unavailable") : format_rate(best->second.slope))
         << ", predicted " << format_rate(report.theorem_exponent) << ", window [" << format_rate(report.window_low)
         << ", " << format_rate(report.window_high) << "]: " << (report.passed ? "PASS" : "FAIL") << "\n";
  emit_report(c, report, io);
  return report.passed ? 0 : 2;
}

}  // namespace

json resolve_preset(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (!doc.contains("preset")) return doc;
  if (!doc["preset"].is_string()) throw ConfigError("preset must be a string");
  json merged = preset_document(doc["preset"].get<std::string>());
  for (auto it = doc.begin(); it != doc.end(); ++it) merged[it.key()] = it.value();
  return merged;
}

RunConfig parse_run_config(const json& input) {
  const json doc = resolve_preset(input);
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!kKnownKeys.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  RunConfig c;
  c.raw = doc;
  // Output location and thread count do not change content.
  c.raw.erase("out");
  c.raw.erase("threads");
  if (doc.contains("system")) {
    const std::string s = doc["system"].is_string() ? doc["system"].get<std::string>() : "";
    if (s == "xor1bit")
      c.system = SystemKind::xor_one_bit;
    else if (s != "single_type")
      throw ConfigError("system must be \"single_type\" or \"xor1bit\"");
  }
  if (!doc.contains("source")) throw ConfigError("missing \"source\" distribution");
  try {
    c.source = Distribution(number_list(doc, "source"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("source: ") + e.what());
  }
  const std::size_t a = c.source.size();
  if (!doc.contains("d_l")) throw ConfigError("missing \"d_l\" matrix");
  c.d_l = matrix_at(doc, "d_l", a);
  c.d_e = doc.contains("d_e") ? matrix_at(doc, "d_e", a) : c.d_l;
  if (auto w = leniency_violation(c.d_e, c.d_l))
    throw ConfigError("d_e is not more lenient than d_l: reproduction w=" + std::to_string(*w) +
                      " has no z with d_e(x,z) <= d_l(x,w) for every x");
  c.witness = LeniencyMap(c.d_e, c.d_l);
  if (c.system == SystemKind::xor_one_bit && (a != 2 || c.d_e.repro_size() != 2))
    throw ConfigError("xor1bit needs a binary source and binary reproductions");

  if (doc.contains("d_c")) c.d_c = number_at(doc, "d_c");
  if (c.d_c < 0) throw ConfigError("d_c must be nonnegative");
  if (doc.contains("distortion")) c.distortions = number_list(doc, "distortion");
  for (double d : c.distortions)
    if (d < c.d_c) throw ConfigError("distortion " + format_rate(d) + " is below d_c " + format_rate(c.d_c));
  if (doc.contains("key_rate")) c.key_rates = number_list(doc, "key_rate");
  for (double r : c.key_rates)
    if (r < 0) throw ConfigError("key_rate must be nonnegative");
  if (doc.contains("r_c")) c.r_c = number_at(doc, "r_c");
  if (doc.contains("excess_exponent")) c.excess_exponent = number_at(doc, "excess_exponent");
  if (doc.contains("n")) {
    for (double v : number_list(doc, "n")) {
      if (v != std::floor(v) || v < 1 || v > 64) throw ConfigError("n values must be integers in [1, 64]");
      c.n_values.push_back(static_cast<int>(v));
    }
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object() || !g.contains("n0")) throw ConfigError("grid must be an object with \"n0\"");
    c.grid_n0 = static_cast<int>(unsigned_at(g, "n0"));
    if (g.contains("epsilon")) c.grid_epsilon = number_at(g, "epsilon");
  }
  if (doc.contains("delta")) c.delta = number_at(doc, "delta");
  if (doc.contains("strategies")) {
    const json& s = doc["strategies"];
    if (!s.is_array() || s.empty()) throw ConfigError("strategies must be a nonempty list");
    c.strategies.clear();
    for (const auto& v : s) {
      if (!v.is_string()) throw ConfigError("strategies must be strings");
      try {
        c.strategies.push_back(parse_strategy(v.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (doc.contains("seed")) c.seed = unsigned_at(doc, "seed");
  c.threads = default_threads();
  if (doc.contains("threads")) c.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, unsigned_at(doc, "threads")));
  if (doc.contains("out")) {
    if (!doc["out"].is_string()) throw ConfigError("out must be a path string");
    c.out = doc["out"].get<std::string>();
  }
  if (doc.contains("points")) c.points = static_cast<int>(unsigned_at(doc, "points"));
  if (doc.contains("mc_trials")) c.mc_trials = unsigned_at(doc, "mc_trials");
  if (doc.contains("max_retries")) c.max_retries = static_cast<int>(unsigned_at(doc, "max_retries"));
  if (doc.contains("exhaustive_bits")) c.limits.exhaustive_bits = number_at(doc, "exhaustive_bits");
  if (doc.contains("max_pairs")) c.limits.max_pairs = unsigned_at(doc, "max_pairs");
  if (doc.contains("cap")) {
    const json& cap = doc["cap"];
    if (!cap.is_object()) throw ConfigError("cap must be an object");
    if (cap.contains("max_length")) c.cap.max_length = static_cast<int>(unsigned_at(cap, "max_length"));
    if (cap.contains("max_elements")) c.cap.max_elements = unsigned_at(cap, "max_elements");
  }
  return c;
}

int run_command(const std::string& name, const json& doc, CommandIo io) {
  try {
    const RunConfig c = parse_run_config(doc);
    if (name == "rd") return cmd_rd(c, io);
    if (name == "exponents") return cmd_exponents(c, io);
    if (name == "build-code") return cmd_build_code(c, io);
    if (name == "attack") return cmd_attack(c, io);
    if (name == "simulate") return cmd_simulate(c, io);
    if (name == "theorem") return cmd_theorem(c, io);
    throw ConfigError("unknown command '" + name + "'");
  } catch (const ConfigError& e) {
    io.err << "config error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace secrd
