#include "secrd/secure_code.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>
#include <unordered_set>

#include "secrd/ball_search.hpp"
#include "secrd/combinatorics.hpp"
#include "secrd/exponents.hpp"
#include "secrd/rd_solver.hpp"

namespace secrd {

std::string Cryptogram::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts[i]) + '/' + std::to_string(widths[i]);
  }
  return s;
}

int PackingCodebook::invariants_passed() const {
  int k = cover_passed ? 1 : 0;
  for (const auto& p : probes) k += p.passed ? 1 : 0;
  return k;
}

bool PackingCodebook::invariants_hold() const {
  return invariants_passed() == static_cast<int>(probes.size()) + 1;
}

namespace {

struct Setup {
  TypeClass source;
  TypeClass words;
  Distribution q;
  int n = 0;
  int key_width = 0;
  double legit_rate = 0.0;
  double cover_target = 0.0;
};

Setup prepare(const CodebookRequest& req) {
  if (req.key_rate < 0.0) throw std::invalid_argument("key rate must be >= 0");
  if (req.d_l.source_size() != req.source_type.counts.size() || req.d_e.source_size() != req.source_type.counts.size())
    throw std::invalid_argument("distortion matrices do not match the source alphabet");
  Setup s;
  s.source = TypeClass(req.source_type);
  s.source.require_enumerable(req.cap);
  s.n = req.source_type.n;
  s.q = req.source_type.as_distribution();
  RdPoint rl = rate_distortion(s.q, req.d_l, req.d_c);
  s.legit_rate = rl.rate;
  std::vector<double> marginal(req.d_l.repro_size(), 0.0);
  for (std::size_t x = 0; x < rl.channel.size(); ++x)
    for (std::size_t w = 0; w < marginal.size(); ++w) marginal[w] += s.q[x] * rl.channel[x][w];
  s.words = TypeClass(nearest_type(Distribution::renormalized(marginal), s.n));
  s.key_width = std::max(0, static_cast<int>(std::ceil(s.n * req.key_rate - 1e-9)));
  if (s.key_width > req.max_key_width)
    throw std::invalid_argument("key width " + std::to_string(s.key_width) + " exceeds the configured maximum " +
                                std::to_string(req.max_key_width));
  s.cover_target = s.n * (packing_exponent_e0(s.q, req.key_rate, req.d_l, req.d_c) - req.delta);
  return s;
}

// Lexicographically first vector of every composition of n over the alphabet.
std::vector<Word> type_representatives(int n, std::size_t alphabet) {
  std::vector<Word> reps;
  for (const auto& c : compositions(n, static_cast<int>(alphabet))) {
    Word w;
    for (std::size_t a = 0; a < c.size(); ++a) w.insert(w.end(), static_cast<std::size_t>(c[a]), static_cast<Symbol>(a));
    reps.push_back(std::move(w));
  }
  return reps;
}

void finish(PackingCodebook& book, const Setup& s, const CodebookRequest& req) {
  book.cover_passed = !book.cover.ranks.empty() &&
                      std::log2(static_cast<double>(book.cover.size())) >= s.cover_target - 1e-9;
  book.probes = probe_codebook(book.codewords, book.cover, s.source, req);
}

auto score(const PackingCodebook& b) {
  double margin = kInfinity;
  for (const auto& p : b.probes)
    margin = std::min(margin, p.ratio > 0 ? std::log2(p.bound / p.ratio) : kInfinity);
  return std::make_tuple(!b.cover.ranks.empty(), b.invariants_passed(), b.disjoint(), margin, b.cover.size());
}

PackingCodebook base_book(const Setup& s, const CodebookRequest& req) {
  PackingCodebook b;
  b.source_type = req.source_type;
  b.codeword_type = s.words.type();
  b.key_rate = req.key_rate;
  b.key_width = s.key_width;
  b.legit_rate = s.legit_rate;
  b.cover_target_log2 = s.cover_target;
  b.selection_seed = req.seed;
  return b;
}

// Greedy cover of the whole source class by codewords of the codeword class.
// Empty result when more than 2^key_width codewords are needed.
std::optional<PackingCodebook> full_cover_book(const Setup& s, const CodebookRequest& req) {
  std::mt19937_64 rng(derive_seed(req.seed, 0));
  std::vector<std::uint64_t> pool;
  const std::uint64_t wsize = s.words.size();
  if (wsize <= static_cast<std::uint64_t>(req.candidate_pool)) {
    for (std::uint64_t r = 0; r < wsize; ++r) pool.push_back(r);
  } else {
    std::unordered_set<std::uint64_t> seen;
    while (pool.size() < static_cast<std::size_t>(req.candidate_pool)) {
      std::uint64_t r = rng() % wsize;
      if (seen.insert(r).second) pool.push_back(r);
    }
    std::sort(pool.begin(), pool.end());
  }
  std::vector<Word> cand;
  for (std::uint64_t r : pool) cand.push_back(s.words.unrank(r));

  const std::vector<Word> xs = s.source.enumerate(req.cap);
  std::vector<std::vector<std::uint32_t>> covers(cand.size());
  for (std::size_t r = 0; r < xs.size(); ++r)
    for (std::size_t c = 0; c < cand.size(); ++c)
      if (within_distortion(total_distortion(xs[r], cand[c], req.d_l), s.n, req.d_c))
        covers[c].push_back(static_cast<std::uint32_t>(r));

  std::vector<char> covered(xs.size(), 0);
  std::size_t remaining = xs.size();
  std::vector<Word> chosen;
  const std::size_t limit = std::size_t{1} << s.key_width;
  while (remaining > 0 && chosen.size() < limit) {
    std::size_t best = 0, best_gain = 0;
    for (std::size_t c = 0; c < cand.size(); ++c) {
      std::size_t g = 0;
      for (auto r : covers[c]) g += covered[r] ? 0 : 1;
      if (g > best_gain) {
        best_gain = g;
        best = c;
      }
    }
    if (best_gain == 0) {
      // The pool misses some source vector; use its per-letter zero-distortion reproduction.
      std::size_t r = 0;
      while (covered[r]) ++r;
      Word w(xs[r].size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = req.d_l.zero_repro(xs[r][i]);
      cand.push_back(w);
      covers.emplace_back();
      for (std::size_t y = 0; y < xs.size(); ++y)
        if (within_distortion(total_distortion(xs[y], w, req.d_l), s.n, req.d_c))
          covers.back().push_back(static_cast<std::uint32_t>(y));
      continue;
    }
    for (auto r : covers[best])
      if (!covered[r]) {
        covered[r] = 1;
        --remaining;
      }
    chosen.push_back(cand[best]);
  }
  if (remaining > 0) return std::nullopt;

  PackingCodebook b = base_book(s, req);
  b.full_cover = true;
  b.attempts = 1;
  const std::size_t m = chosen.size();
  for (std::size_t i = 0; i < limit; ++i) b.codewords.push_back(chosen[i % m]);
  b.cover = d_cover(b.codewords, s.source, req.d_l, req.d_c, req.cap);
  finish(b, s, req);
  return b;
}

PackingCodebook random_book(const Setup& s, const CodebookRequest& req, int attempt) {
  const std::uint64_t count = std::uint64_t{1} << s.key_width;
  const std::uint64_t wsize = s.words.size();
  if (wsize < count)
    throw std::invalid_argument("codeword type class has " + std::to_string(wsize) + " members, fewer than 2^" +
                                std::to_string(s.key_width));
  std::mt19937_64 rng(derive_seed(req.seed, 1, static_cast<std::uint64_t>(attempt)));
  std::unordered_set<std::uint64_t> seen;
  PackingCodebook b = base_book(s, req);
  b.selection_seed = derive_seed(req.seed, 1, static_cast<std::uint64_t>(attempt));
  b.attempts = attempt + 1;
  while (b.codewords.size() < count) {
    std::uint64_t r = rng() % wsize;
    if (seen.insert(r).second) b.codewords.push_back(s.words.unrank(r));
  }
  b.cover = d_cover(b.codewords, s.source, req.d_l, req.d_c, req.cap);
  finish(b, s, req);
  return b;
}

}  // namespace

std::vector<ProbeCheck> probe_codebook(const std::vector<Word>& codewords, const DCover& cover, const TypeClass& source,
                                       const CodebookRequest& req) {
  const int n = source.length();
  const Distribution q = source.type().as_distribution();
  std::vector<Word> xs;
  xs.reserve(cover.size());
  for (std::uint64_t r : cover.ranks) xs.push_back(source.unrank(r));
  const std::vector<std::uint64_t> ones(xs.size(), 1);
  const bool exhaustive = index_bits(n, req.d_e.repro_size()) <= req.exhaustive_bits;

  std::vector<Word> candidates;
  if (!exhaustive) {
    candidates = type_representatives(n, req.d_e.repro_size());
    if (auto witness = leniency_witness(req.d_e, req.d_l)) {
      for (const Word& w : codewords) {
        Word z(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) z[i] = (*witness)[static_cast<std::size_t>(w[i])];
        candidates.push_back(std::move(z));
      }
    }
  }

  std::vector<ProbeCheck> out;
  for (double level : req.probe_distortions) {
    ProbeCheck p;
    p.distortion = level;
    double re = rate_distortion(q, req.d_e, level).rate;
    p.bound = std::exp2(-n * (std::min(req.key_rate, re) - req.delta));
    p.exhaustive = exhaustive;
    if (!xs.empty()) {
      BestReproduction best = exhaustive ? best_reproduction(xs, ones, req.d_e, level, req.exhaustive_bits)
                                         : best_among(xs, ones, candidates, req.d_e, level);
      p.max_count = best.weight;
      p.best_z = best.z;
      p.ratio = static_cast<double>(best.weight) / static_cast<double>(xs.size());
    }
    p.passed = !xs.empty() && p.ratio <= p.bound * (1.0 + 1e-12);
    out.push_back(std::move(p));
  }
  return out;
}

PackingCodebook select_packing_codebook(const CodebookRequest& req) {
  const Setup s = prepare(req);
  if (req.key_rate + 1e-9 >= s.legit_rate) {
    if (auto b = full_cover_book(s, req)) {
      if (b->invariants_hold()) return *b;
      throw SelectionFailure("full-cover codebook misses packing invariants", *b);
    }
  }
  std::optional<PackingCodebook> best;
  const int tries = std::max(1, req.max_retries);
  for (int a = 0; a < tries; ++a) {
    PackingCodebook b = random_book(s, req, a);
    if (b.invariants_hold() && b.disjoint()) return b;
    if (!best || score(b) > score(*best)) best = std::move(b);
  }
  best->attempts = tries;
  if (best->invariants_hold()) return *best;
  throw SelectionFailure("no codebook met the packing invariants in " + std::to_string(tries) + " attempts", *best);
}

PackingCodebook select_packing_codebook_or_best(const CodebookRequest& req) {
  try {
    return select_packing_codebook(req);
  } catch (const SelectionFailure& f) {
    return f.best();
  }
}

SingleTypeCode::SingleTypeCode(PackingCodebook codebook, PermutationCover cover, DistortionMatrix d_l, double d_c)
    : book_(std::move(codebook)), cover_(std::move(cover)), d_l_(std::move(d_l)), d_c_(d_c) {
  if (!(cover_.type.type() == book_.source_type)) throw std::invalid_argument("cover and codebook types differ");
  permutation_width_ = static_cast<int>(index_width(cover_.count()));
  const int n = length();
  i_star_.resize(cover_.first_cover.size());
  for (std::uint64_t r = 0; r < i_star_.size(); ++r) {
    const Word x = cover_.type.unrank(r);
    const Permutation& p = cover_.permutations[cover_.first_cover[r]];
    bool found = false;
    for (std::size_t i = 0; i < book_.codewords.size() && !found; ++i) {
      if (within_distortion(total_distortion(x, apply_permutation(p, book_.codewords[i]), d_l_), n, d_c_)) {
        i_star_[r] = static_cast<std::uint32_t>(i);
        found = true;
      }
    }
    if (!found) throw std::logic_error("permutation cover disagrees with the codebook's D-cover");
  }
}

Cryptogram SingleTypeCode::encode(std::span<const Symbol> x, std::uint64_t key) const {
  if (!cover_.type.contains(x)) throw std::invalid_argument("source vector is not in the code's type class");
  if ((key & ~low_mask(key_width())) != 0) throw std::invalid_argument("key wider than the code's key width");
  const std::uint64_t r = cover_.type.rank(x);
  return Cryptogram{{t_star(r), static_cast<std::uint64_t>(i_star(r)) ^ key}, {permutation_width_, key_width()}};
}

Word SingleTypeCode::decode(const Cryptogram& y, std::uint64_t key) const {
  if (y.parts.size() != 2 || y.widths != std::vector<int>{permutation_width_, key_width()})
    throw std::invalid_argument("cryptogram layout does not match the code");
  if ((key & ~low_mask(key_width())) != 0) throw std::invalid_argument("key wider than the code's key width");
  if (y.parts[0] >= cover_.count()) throw std::out_of_range("permutation index outside the cover");
  const std::uint64_t i = y.parts[1] ^ key;
  return apply_permutation(cover_.permutations[y.parts[0]], book_.codewords[i]);
}

SingleTypeCode build_single_type_code(PackingCodebook codebook, const DistortionMatrix& d_l, double d_c,
                                      std::uint64_t seed, const CoverOptions& options) {
  if (codebook.cover.ranks.empty()) throw std::invalid_argument("codebook covers no vector of the source type");
  TypeClass t(codebook.source_type);
  PermutationCover cover = cover_with_permutations(codebook.cover.ranks, t, seed, options);
  return SingleTypeCode(std::move(codebook), std::move(cover), d_l, d_c);
}

}  // namespace secrd
