#include "secrd/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "secrd/ball_search.hpp"
#include "secrd/combinatorics.hpp"
#include "secrd/type_class.hpp"

namespace secrd {

LeniencyMap::LeniencyMap(const DistortionMatrix& d_e, const DistortionMatrix& d_l) {
  auto w = leniency_witness(d_e, d_l);
  if (!w) {
    auto bad = leniency_violation(d_e, d_l);
    throw std::invalid_argument("eavesdropper distortion is not more lenient: reproduction symbol " +
                                std::to_string(bad.value_or(-1)) + " has no dominating estimate symbol");
  }
  table_ = std::move(*w);
}

LeniencyMap LeniencyMap::identity(std::size_t alphabet) {
  LeniencyMap m;
  for (std::size_t i = 0; i < alphabet; ++i) m.table_.push_back(static_cast<Symbol>(i));
  return m;
}

Word LeniencyMap::apply(std::span<const Symbol> w) const {
  Word z(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) z[i] = table_.at(static_cast<std::size_t>(w[i]));
  return z;
}

namespace {

void check_pairs(const CipherSystem& s, std::uint64_t keys_per_source, const AttackLimits& limits) {
  const long double pairs = static_cast<long double>(s.source_count()) * keys_per_source;
  if (pairs > static_cast<long double>(limits.max_pairs))
    throw CapExceeded("exact evaluation needs " + std::to_string(static_cast<double>(pairs)) +
                          " enumerated cases; required cap: max_pairs >= that count",
                      s.block_length(), static_cast<std::uint64_t>(std::min<long double>(pairs, 1.8e19L)));
}

Word type_representative(const std::vector<int>& counts) {
  Word w;
  for (std::size_t a = 0; a < counts.size(); ++a) w.insert(w.end(), static_cast<std::size_t>(counts[a]), static_cast<Symbol>(a));
  return w;
}

}  // namespace

OptimalAdversary::OptimalAdversary(const CipherSystem& system, const DistortionMatrix& d_e, double level,
                                   const LeniencyMap& witness, const AttackLimits& limits) {
  const std::uint64_t keys = 1ULL << system.key_width();
  check_pairs(system, keys, limits);
  const int n = system.block_length();
  std::map<Cryptogram, std::map<std::uint64_t, std::uint64_t>> posterior;
  for (std::uint64_t i = 0; i < system.source_count(); ++i) {
    const Word x = system.source_block(i);
    for (std::uint64_t u = 0; u < keys; ++u) ++posterior[system.encode(x, u)][i];
  }
  exhaustive_ = index_bits(n, d_e.repro_size()) <= limits.exhaustive_bits;
  std::optional<ReproductionScorer> scorer;
  std::vector<Word> shared;
  if (exhaustive_) {
    scorer.emplace(n, d_e, level, limits.exhaustive_bits);
  } else {
    for (const auto& c : compositions(n, static_cast<int>(d_e.repro_size()))) shared.push_back(type_representative(c));
    if (auto t = system.source_type()) shared.push_back(blind_estimate(*t, d_e, level).z);
  }
  std::uint64_t hits = 0;
  for (const auto& [y, weights_by_x] : posterior) {
    std::vector<Word> xs;
    std::vector<std::uint64_t> ws;
    std::uint64_t total = 0;
    for (const auto& [i, c] : weights_by_x) {
      xs.push_back(system.source_block(i));
      ws.push_back(c);
      total += c;
    }
    BestReproduction best;
    if (exhaustive_) {
      best = scorer->best(xs, ws);
    } else {
      std::vector<Word> cands = shared;
      for (std::uint64_t v = 0; v < std::min<std::uint64_t>(keys, 1024); ++v) cands.push_back(witness.apply(system.decode(y, v)));
      best = best_among(xs, ws, cands, d_e, level);
    }
    hits += best.weight;
    table_[y] = Estimate{best.z, static_cast<double>(best.weight) / static_cast<double>(total), exhaustive_};
  }
  success_ = static_cast<double>(hits) / (static_cast<double>(system.source_count()) * static_cast<double>(keys));
}

const Estimate& OptimalAdversary::estimate(const Cryptogram& y) const {
  auto it = table_.find(y);
  if (it == table_.end()) throw std::out_of_range("cryptogram " + y.to_string() + " is never emitted");
  return it->second;
}

Word KeyAttack::estimate(const Cryptogram& y, std::uint64_t guess) const {
  return witness_.apply(system_->decode(y, guess));
}

Word KeyAttack::estimate(const Cryptogram& y, std::mt19937_64& rng) const {
  return estimate(y, rng() & low_mask(system_->key_width()));
}

double KeyAttack::exact_success(const DistortionMatrix& d_e, double level, const AttackLimits& limits) const {
  if (!system_->key_enters_by_xor()) return exact_success_full(d_e, level, limits);
  const std::uint64_t keys = 1ULL << system_->key_width();
  check_pairs(*system_, keys, limits);
  const int n = system_->block_length();
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < system_->source_count(); ++i) {
    const Word x = system_->source_block(i);
    const Cryptogram y = system_->encode(x, 0);
    for (std::uint64_t g = 0; g < keys; ++g)
      hits += within_distortion(total_distortion(x, estimate(y, g), d_e), n, level);
  }
  return static_cast<double>(hits) / (static_cast<double>(system_->source_count()) * static_cast<double>(keys));
}

double KeyAttack::exact_success_full(const DistortionMatrix& d_e, double level, const AttackLimits& limits) const {
  const std::uint64_t keys = 1ULL << system_->key_width();
  check_pairs(*system_, keys * keys, limits);
  const int n = system_->block_length();
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < system_->source_count(); ++i) {
    const Word x = system_->source_block(i);
    for (std::uint64_t u = 0; u < keys; ++u) {
      const Cryptogram y = system_->encode(x, u);
      for (std::uint64_t g = 0; g < keys; ++g)
        hits += within_distortion(total_distortion(x, estimate(y, g), d_e), n, level);
    }
  }
  return static_cast<double>(hits) /
         (static_cast<double>(system_->source_count()) * static_cast<double>(keys) * static_cast<double>(keys));
}

std::uint64_t count_within(const EmpiricalType& source, const std::vector<int>& z_counts, const DistortionMatrix& d_e,
                           double level) {
  const std::size_t xa = source.counts.size(), za = z_counts.size();
  if (d_e.source_size() != xa || d_e.repro_size() != za) throw std::invalid_argument("alphabets do not match d_E");
  int zn = 0;
  for (int c : z_counts) zn += c;
  if (zn != source.n) throw std::invalid_argument("z counts do not sum to the block length");
  const double budget = source.n * level + kDistortionSlack;

  // Fill the joint counts column by column (one column per z symbol).
  std::vector<int> remaining = source.counts;
  std::vector<std::vector<int>> columns(za, std::vector<int>(xa, 0));
  u128 total = 0;
  auto rec = [&](auto&& self, std::size_t b, std::size_t a, int left, double dist, u128 ways) -> void {
    if (b == za) {
      if (std::all_of(remaining.begin(), remaining.end(), [](int v) { return v == 0; })) total += ways;
      return;
    }
    std::vector<int>& column = columns[b];
    if (a + 1 == xa) {
      if (left > remaining[a]) return;
      column[a] = left;
      double d2 = dist + left * d_e(static_cast<Symbol>(a), static_cast<Symbol>(b));
      if (d2 > budget) return;
      u128 w = ways * multinomial(column);
      for (std::size_t i = 0; i < xa; ++i) remaining[i] -= column[i];
      self(self, b + 1, 0, b + 1 < za ? z_counts[b + 1] : 0, d2, w);
      for (std::size_t i = 0; i < xa; ++i) remaining[i] += column[i];
      return;
    }
    for (int c = 0; c <= std::min(left, remaining[a]); ++c) {
      column[a] = c;
      double d2 = dist + c * d_e(static_cast<Symbol>(a), static_cast<Symbol>(b));
      if (d2 > budget) break;
      self(self, b, a + 1, left - c, d2, ways);
    }
  };
  rec(rec, 0, 0, z_counts[0], 0.0, 1);
  if (total > static_cast<u128>(~0ULL)) throw std::overflow_error("count exceeds 64 bits");
  return static_cast<std::uint64_t>(total);
}

Estimate blind_estimate(const EmpiricalType& q, const DistortionMatrix& d_e, double level) {
  const TypeClass t(q);
  const double size = static_cast<double>(t.size());
  std::uint64_t best = 0;
  Word best_z;
  for (const auto& c : compositions(q.n, static_cast<int>(d_e.repro_size()))) {
    std::uint64_t k = count_within(q, c, d_e, level);
    Word z = type_representative(c);
    if (best_z.empty() || k > best || (k == best && z < best_z)) {
      best = k;
      best_z = std::move(z);
    }
  }
  return Estimate{best_z, static_cast<double>(best) / size, true};
}

double type_probability(const EmpiricalType& q, const Distribution& p) {
  if (p.size() != q.counts.size()) throw std::invalid_argument("type and distribution alphabets differ");
  double lg = log2_multinomial(q.counts);
  for (std::size_t a = 0; a < p.size(); ++a) {
    if (q.counts[a] == 0) continue;
    if (p[a] == 0.0) return 0.0;
    lg += q.counts[a] * std::log2(p[a]);
  }
  return std::exp2(lg);
}

double type_aware_blind_success(int n, const Distribution& p, const DistortionMatrix& d_e, double level) {
  double s = 0.0;
  for (const auto& c : compositions(n, static_cast<int>(p.size()))) {
    EmpiricalType q(c);
    double pt = type_probability(q, p);
    if (pt > 0.0) s += pt * blind_estimate(q, d_e, level).probability;
  }
  return s;
}

TypeGuessResult random_type_guess_success(int n, const Distribution& p, const DistortionMatrix& d_e, double level) {
  const auto types = compositions(n, static_cast<int>(p.size()));
  std::vector<std::vector<int>> guess_z;
  for (const auto& c : types) {
    Word z = blind_estimate(EmpiricalType(c), d_e, level).z;
    guess_z.push_back(empirical_type(z, d_e.repro_size()).counts);
  }
  TypeGuessResult r;
  r.type_count = types.size();
  const double share = 1.0 / static_cast<double>(types.size());
  for (std::size_t t = 0; t < types.size(); ++t) {
    EmpiricalType q(types[t]);
    double pt = type_probability(q, p);
    if (pt == 0.0) continue;
    double size = static_cast<double>(TypeClass(q).size());
    for (std::size_t g = 0; g < types.size(); ++g) {
      double hit = static_cast<double>(count_within(q, guess_z[g], d_e, level)) / size;
      r.total += pt * share * hit;
      if (g == t) r.correct_guess_term += pt * share * hit;
    }
  }
  return r;
}

}  // namespace secrd
