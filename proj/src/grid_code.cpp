#include "secrd/grid_code.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "secrd/ball_search.hpp"
#include "secrd/combinatorics.hpp"
#include "secrd/parallel.hpp"
#include "secrd/rd_solver.hpp"

namespace secrd {

HammingBall::HammingBall(int length, int radius, std::size_t alphabet)
    : length_(length), radius_(std::min(radius, length)), alphabet_(alphabet) {
  if (length < 0 || radius < 0 || alphabet == 0) throw std::invalid_argument("invalid Hamming ball parameters");
  size_ = 0;
  for (int w = 0; w <= radius_; ++w) size_ += count(length_, w);
}

std::uint64_t HammingBall::count(int length, int weight) const {
  if (weight < 0 || weight > length) return 0;
  std::uint64_t c = binomial(static_cast<std::uint64_t>(length), static_cast<std::uint64_t>(weight));
  for (int i = 0; i < weight; ++i) c *= alphabet_;
  return c;
}

std::uint64_t HammingBall::rank(std::span<const Symbol> pattern) const {
  if (static_cast<int>(pattern.size()) != length_) throw std::invalid_argument("pattern length differs from the ball");
  int weight = 0;
  for (Symbol s : pattern) {
    if (s < 0 || static_cast<std::size_t>(s) > alphabet_) throw std::invalid_argument("pattern symbol out of range");
    weight += s != 0;
  }
  if (weight > radius_) throw std::invalid_argument("pattern weight exceeds the ball radius");
  std::uint64_t r = 0;
  for (int w = 0; w < weight; ++w) r += count(length_, w);
  int rem = weight;
  for (int i = 0; i < length_; ++i) {
    const int after = length_ - i - 1;
    const Symbol s = pattern[static_cast<std::size_t>(i)];
    for (Symbol b = 0; b < s; ++b) r += b == 0 ? count(after, rem) : count(after, rem - 1);
    if (s != 0) --rem;
  }
  return r;
}

Word HammingBall::unrank(std::uint64_t index) const {
  if (index >= size_) throw std::out_of_range("index outside the Hamming ball");
  int weight = 0;
  while (index >= count(length_, weight)) index -= count(length_, weight++);
  Word p(static_cast<std::size_t>(length_), 0);
  int rem = weight;
  for (int i = 0; i < length_; ++i) {
    const int after = length_ - i - 1;
    for (Symbol b = 0;; ++b) {
      std::uint64_t ways = b == 0 ? count(after, rem) : count(after, rem - 1);
      if (index < ways) {
        p[static_cast<std::size_t>(i)] = b;
        if (b != 0) --rem;
        break;
      }
      index -= ways;
    }
  }
  return p;
}

Word replace_symbols(std::span<const Symbol> x, std::span<const Symbol> pattern) {
  if (x.size() != pattern.size()) throw std::invalid_argument("pattern length differs from the vector");
  Word out(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i)
    if (pattern[i] != 0) out[i] = pattern[i] - 1;
  return out;
}

std::vector<EmpiricalType> grid_types(int n0, std::size_t alphabet) {
  std::vector<EmpiricalType> out;
  for (auto& c : compositions(n0, static_cast<int>(alphabet)))
    if (std::all_of(c.begin(), c.end(), [](int v) { return v > 0; })) out.emplace_back(c);
  return out;
}

double l1_distance(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size()) throw std::invalid_argument("distributions over different alphabets");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

std::size_t nearest_grid_type(const EmpiricalType& q, const std::vector<EmpiricalType>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty grid");
  const Distribution qd = q.as_distribution();
  std::size_t best = 0;
  double best_d = kInfinity;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double d = l1_distance(qd, grid[g].as_distribution());
    if (d < best_d - 1e-12) {
      best_d = d;
      best = g;
    }
  }
  return best;
}

bool KeyStream::next_bit() {
  if (fixed_) {
    if (pos_ >= bits_.size()) throw std::out_of_range("key stream exhausted");
    return bits_[pos_++];
  }
  if (pos_ % 64 == 0) {
    std::uint64_t word = rng_();
    for (int i = 0; i < 64; ++i) bits_.push_back((word >> i) & 1);
  }
  return bits_[pos_++];
}

std::uint64_t KeyStream::take(int width) {
  if (width < 0 || width > 64) throw std::invalid_argument("key chunk width must be in [0, 64]");
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(next_bit()) << i;
  return v;
}

double ball_exponent(double epsilon, std::size_t alphabet) {
  return binary_entropy(epsilon / 2) + epsilon / 2 * std::log2(static_cast<double>(alphabet));
}

namespace {

std::vector<int> scaled_counts(const EmpiricalType& t, int length) {
  std::vector<int> c = t.counts;
  for (int& v : c) v = v * length / t.n;
  return c;
}

// Stable ascending argsort: sorted[i] = x[order[i]].
std::vector<int> sort_order(std::span<const Symbol> x) {
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x[static_cast<std::size_t>(a)] < x[static_cast<std::size_t>(b)]; });
  return order;
}

std::vector<int> counts_of(std::span<const Symbol> x, std::size_t alphabet) {
  std::vector<int> c(alphabet, 0);
  for (Symbol s : x) ++c[static_cast<std::size_t>(s)];
  return c;
}

std::uint64_t power(std::size_t base, int exp) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

}  // namespace

double GridCode::assignment_distance(std::size_t raw) const {
  return l1_distance(EmpiricalType(raw_types_[raw]).as_distribution(), grid_[assigned_[raw]].as_distribution());
}

std::size_t GridCode::type_index(std::span<const Symbol> x) const {
  if (static_cast<int>(x.size()) != config_.n) throw std::invalid_argument("source vector length differs from the code");
  for (Symbol s : x)
    if (s < 0 || static_cast<std::size_t>(s) >= grid_.front().counts.size())
      throw std::invalid_argument("source symbol out of range");
  return raw_index_.at(counts_of(x, grid_.front().counts.size()));
}

const std::vector<std::uint32_t>& GridCode::replacement_set(const std::vector<int>& prefix_counts, std::size_t g) const {
  auto it = replacement_sets_.find({prefix_counts, g});
  if (it == replacement_sets_.end()) throw std::logic_error("replacement set was not prepared for this prefix type");
  return it->second;
}

std::size_t GridCode::replacement_set_size(const std::vector<int>& prefix_counts, std::size_t g) const {
  return replacement_set(prefix_counts, g).size();
}

KeyWidths GridCode::key_widths(std::span<const Symbol> x) const {
  const std::size_t raw = type_index(x);
  if (!covered_[raw]) return {};
  const std::size_t g = assigned_[raw];
  const auto prefix = counts_of(x.first(static_cast<std::size_t>(truncated_)), grid_[g].counts.size());
  return KeyWidths{tail_width_, static_cast<int>(index_width(ball_.size())),
                   static_cast<int>(index_width(replacement_set(prefix, g).size())), codes_[g]->key_width()};
}

int GridCode::max_key_bits() const {
  int best = 0;
  const std::size_t a = grid_.front().counts.size();
  for (std::size_t raw = 0; raw < raw_types_.size(); ++raw) {
    if (!covered_[raw]) continue;
    const std::size_t g = assigned_[raw];
    for (const auto& tail : compositions(config_.n - truncated_, static_cast<int>(a))) {
      std::vector<int> prefix(a);
      bool ok = true;
      for (std::size_t i = 0; i < a; ++i) ok &= (prefix[i] = raw_types_[raw][i] - tail[i]) >= 0;
      if (!ok) continue;
      int bits = tail_width_ + static_cast<int>(index_width(ball_.size())) +
                 static_cast<int>(index_width(replacement_set(prefix, g).size())) + codes_[g]->key_width();
      best = std::max(best, bits);
    }
  }
  return best;
}

int GridCode::max_cryptogram_bits() const {
  int best = type_width_;
  for (std::size_t raw = 0; raw < raw_types_.size(); ++raw) {
    if (!covered_[raw]) continue;
    const auto& c = *codes_[assigned_[raw]];
    best = std::max(best, type_width_ + tail_width_ + static_cast<int>(index_width(ball_.size())) +
                              c.permutation_width() + c.key_width());
  }
  return best;
}

Cryptogram GridCode::encode(std::span<const Symbol> x, KeyStream& key) const {
  const std::size_t raw = type_index(x);
  if (!covered_[raw]) return Cryptogram{{raw}, {type_width_}};
  const std::size_t g = assigned_[raw];
  const std::size_t a = grid_[g].counts.size();
  const auto prefix = x.first(static_cast<std::size_t>(truncated_));
  const auto tail = x.subspan(static_cast<std::size_t>(truncated_));
  const auto& code = *codes_[g];
  const auto& kset = replacement_set(counts_of(prefix, a), g);
  const int ball_width = static_cast<int>(index_width(ball_.size()));

  const std::uint64_t u2 = key.take(tail_width_);
  const std::uint64_t u3 = key.take(ball_width);
  const std::uint64_t ubar = key.take(static_cast<int>(index_width(kset.size())));
  const std::uint64_t u4 = key.take(code.key_width());

  const Word sorted_pattern = ball_.unrank(kset[ubar % kset.size()]);
  const auto order = sort_order(prefix);
  Word pattern(prefix.size());
  for (std::size_t i = 0; i < order.size(); ++i) pattern[static_cast<std::size_t>(order[i])] = sorted_pattern[i];
  const Word v = replace_symbols(prefix, pattern);
  Word replaced(prefix.size(), 0);  // original symbols at replaced positions, 0 elsewhere
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (pattern[i] != 0) replaced[i] = prefix[i] + 1;

  const Cryptogram inner = code.encode(v, u4);
  return Cryptogram{{raw, word_index(tail, a) ^ u2, ball_.rank(replaced) ^ u3, inner.parts[0], inner.parts[1]},
                    {type_width_, tail_width_, ball_width, inner.widths[0], inner.widths[1]}};
}

Word GridCode::decode(const Cryptogram& y, KeyStream& key) const {
  if (y.parts.empty() || y.widths.size() != y.parts.size() || y.widths[0] != type_width_)
    throw std::invalid_argument("cryptogram layout does not match the code");
  const std::size_t raw = y.parts[0];
  if (raw >= raw_types_.size()) throw std::out_of_range("type index outside the type enumeration");
  const DistortionMatrix& d = config_.d_l;
  if (!covered_[raw]) return Word(static_cast<std::size_t>(config_.n), 0);
  if (y.parts.size() != 5) throw std::invalid_argument("cryptogram of a covered type needs five parts");
  const std::size_t g = assigned_[raw];
  const std::size_t a = grid_[g].counts.size();
  const auto& code = *codes_[g];
  const int ball_width = static_cast<int>(index_width(ball_.size()));

  const std::uint64_t u2 = key.take(tail_width_);
  const Word tail = index_word(y.parts[1] ^ u2, config_.n - truncated_, a);
  std::vector<int> prefix = raw_types_[raw];
  for (Symbol s : tail) --prefix[static_cast<std::size_t>(s)];
  const std::uint64_t u3 = key.take(ball_width);
  key.take(static_cast<int>(index_width(replacement_set(prefix, g).size())));
  const std::uint64_t u4 = key.take(code.key_width());

  const Word replaced = ball_.unrank(y.parts[2] ^ u3);
  Word repro_pattern(replaced.size(), 0);
  for (std::size_t i = 0; i < replaced.size(); ++i)
    if (replaced[i] != 0) repro_pattern[i] = d.zero_repro(replaced[i] - 1) + 1;
  const Word inner = code.decode(Cryptogram{{y.parts[3], y.parts[4]}, {y.widths[3], y.widths[4]}}, u4);
  Word w = replace_symbols(inner, repro_pattern);
  for (Symbol s : tail) w.push_back(d.zero_repro(s));
  return w;
}

GridCode build_grid_code(const GridConfig& cfg) {
  const std::size_t a = cfg.d_l.source_size();
  if (cfg.d_e.source_size() != a) throw std::invalid_argument("distortion matrices do not share a source alphabet");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (cfg.n0 < static_cast<int>(a)) throw std::invalid_argument("n0 below the alphabet size leaves the grid empty");
  const double n1 = cfg.n0 * cfg.epsilon + 2.0 * cfg.n0 * static_cast<double>(a);
  if (!(cfg.n > cfg.n0 && cfg.n > n1))
    throw std::invalid_argument("block length " + std::to_string(cfg.n) + " must exceed max(n0, n0*eps + 2*n0*|X|) = " +
                                std::to_string(std::max<double>(cfg.n0, n1)));

  GridCode gc;
  gc.config_ = cfg;
  gc.truncated_ = cfg.n / cfg.n0 * cfg.n0;
  gc.tail_width_ = static_cast<int>(index_width(power(a, cfg.n - gc.truncated_)));
  gc.grid_ = grid_types(cfg.n0, a);
  gc.raw_types_ = compositions(cfg.n, static_cast<int>(a));
  gc.type_width_ = static_cast<int>(index_width(gc.raw_types_.size()));
  gc.ball_ = HammingBall(gc.truncated_, static_cast<int>(std::floor(gc.truncated_ * cfg.epsilon / 2 + 1e-9)), a);

  std::set<std::size_t> needed;
  for (std::size_t raw = 0; raw < gc.raw_types_.size(); ++raw) {
    EmpiricalType t(gc.raw_types_[raw]);
    gc.raw_index_[t.counts] = raw;
    double rl = rate_distortion(t.as_distribution(), cfg.d_l, cfg.d_c).rate;
    gc.legit_rates_.push_back(rl);
    gc.covered_.push_back(cfg.r_c + 1e-9 >= rl);
    gc.assigned_.push_back(nearest_grid_type(t, gc.grid_));
    if (gc.covered_.back()) needed.insert(gc.assigned_.back());
  }

  // Replacement sets for every prefix type reachable from a covered type.
  for (std::size_t raw = 0; raw < gc.raw_types_.size(); ++raw) {
    if (!gc.covered_[raw]) continue;
    const std::size_t g = gc.assigned_[raw];
    const auto target = scaled_counts(gc.grid_[g], gc.truncated_);
    for (const auto& tail : compositions(cfg.n - gc.truncated_, static_cast<int>(a))) {
      std::vector<int> prefix(a);
      bool ok = true;
      for (std::size_t i = 0; i < a; ++i) ok &= (prefix[i] = gc.raw_types_[raw][i] - tail[i]) >= 0;
      if (!ok || gc.replacement_sets_.count({prefix, g})) continue;
      int needed_changes = 0;
      for (std::size_t i = 0; i < a; ++i) needed_changes += std::max(0, prefix[i] - target[i]);
      if (needed_changes > gc.ball_.radius())
        throw std::invalid_argument("replacement set empty: prefix type needs " + std::to_string(needed_changes) +
                                    " replacements but the ball radius is " + std::to_string(gc.ball_.radius()) +
                                    "; increase n or epsilon");
      const Word sorted = TypeClass(EmpiricalType(prefix)).first();
      std::vector<std::uint32_t> set;
      for (std::uint64_t r = 0; r < gc.ball_.size(); ++r) {
        if (counts_of(replace_symbols(sorted, gc.ball_.unrank(r)), a) == target)
          set.push_back(static_cast<std::uint32_t>(r));
      }
      gc.replacement_sets_[{prefix, g}] = std::move(set);
    }
  }

  gc.codes_.resize(gc.grid_.size());
  const std::vector<std::size_t> todo(needed.begin(), needed.end());
  parallel_for(todo.size(), cfg.threads, [&](std::size_t i) {
    const std::size_t g = todo[i];
    CodebookRequest req;
    req.source_type = EmpiricalType(scaled_counts(gc.grid_[g], gc.truncated_));
    req.key_rate = cfg.key_rate;
    req.d_l = cfg.d_l;
    req.d_c = cfg.d_c;
    req.d_e = cfg.d_e;
    req.probe_distortions = cfg.probe_distortions;
    req.delta = cfg.delta;
    req.seed = derive_seed(cfg.seed, 2, g);
    req.max_retries = cfg.max_retries;
    req.cap = cfg.cap;
    gc.codes_[g] = build_single_type_code(select_packing_codebook_or_best(req), cfg.d_l, cfg.d_c,
                                          derive_seed(cfg.seed, 3, g), cfg.cover);
  });
  return gc;
}

}  // namespace secrd
