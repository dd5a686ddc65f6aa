#include "secrd/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace secrd {

bool DCover::contains(std::uint64_t rank) const { return std::binary_search(ranks.begin(), ranks.end(), rank); }

DCover d_cover(const std::vector<Word>& codewords, const TypeClass& t, const DistortionMatrix& d_l, double d_c,
               const EnumerationCap& cap) {
  if (t.alphabet_size() != d_l.source_size()) throw std::invalid_argument("type class and distortion alphabets differ");
  for (const Word& w : codewords)
    if (static_cast<int>(w.size()) != t.length()) throw std::invalid_argument("codeword length differs from the type class");
  DCover out;
  t.for_each(
      [&](std::uint64_t r, const Word& x) {
        int hits = 0;
        std::uint32_t first = 0;
        for (std::size_t i = 0; i < codewords.size(); ++i) {
          if (within_distortion(total_distortion(x, codewords[i], d_l), t.length(), d_c)) {
            if (hits == 0) first = static_cast<std::uint32_t>(i);
            ++hits;
          }
        }
        if (hits > 0) {
          out.ranks.push_back(r);
          out.codeword.push_back(first);
          if (hits > 1) ++out.multiply_covered;
        }
      },
      cap);
  return out;
}

Word apply_permutation(const Permutation& perm, std::span<const Symbol> x) {
  if (perm.size() != x.size()) throw std::invalid_argument("permutation length differs from the vector");
  Word out(x.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = x[static_cast<std::size_t>(perm[i])];
  return out;
}

Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

bool is_permutation(const Permutation& perm) {
  std::vector<char> seen(perm.size(), 0);
  for (int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}

std::vector<std::vector<std::uint64_t>> PermutationCover::exclusive_sets() const {
  std::vector<std::vector<std::uint64_t>> sets(permutations.size());
  for (std::uint64_t r = 0; r < first_cover.size(); ++r) sets[first_cover[r]].push_back(r);
  return sets;
}

std::vector<std::uint64_t> PermutationCover::exclusive_sizes() const {
  std::vector<std::uint64_t> sizes(permutations.size(), 0);
  for (std::uint32_t t : first_cover) ++sizes[t];
  return sizes;
}

double PermutationCover::lower_bound() const {
  return static_cast<double>(type.size()) / static_cast<double>(base.size());
}

double PermutationCover::covering_bound() const { return lower_bound() * type.log2_size(); }

double PermutationCover::bound_overshoot() const {
  return std::max(0.0, static_cast<double>(count()) - covering_bound());
}

namespace {

// A permutation carrying base vector b onto target u (both in the same class):
// b[perm[i]] == u[i], matching equal symbols in a random order.
Permutation carry_onto(const Word& b, const Word& u, std::size_t alphabet, std::mt19937_64& rng) {
  std::vector<std::vector<int>> slots(alphabet);
  for (std::size_t i = 0; i < b.size(); ++i) slots[static_cast<std::size_t>(b[i])].push_back(static_cast<int>(i));
  for (auto& s : slots) std::shuffle(s.begin(), s.end(), rng);
  Permutation perm(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto& s = slots[static_cast<std::size_t>(u[i])];
    perm[i] = s.back();
    s.pop_back();
  }
  return perm;
}

}  // namespace

PermutationCover cover_with_permutations(std::vector<std::uint64_t> base, const TypeClass& t, std::uint64_t seed,
                                         const CoverOptions& options) {
  t.require_enumerable(options.cap);
  if (base.empty()) throw std::invalid_argument("permutation cover needs a nonempty base set");
  std::sort(base.begin(), base.end());
  base.erase(std::unique(base.begin(), base.end()), base.end());
  const std::uint64_t total = t.size();
  if (base.back() >= total) throw std::invalid_argument("base rank outside the type class");

  const int n = t.length();
  std::vector<Word> base_words;
  base_words.reserve(base.size());
  for (std::uint64_t r : base) base_words.push_back(t.unrank(r));

  std::mt19937_64 rng(seed);
  std::vector<char> covered(total, 0);
  std::uint64_t remaining = total;
  std::vector<Permutation> chosen;

  auto image_ranks = [&](const Permutation& p, std::vector<std::uint64_t>& out) {
    out.clear();
    for (const Word& b : base_words) out.push_back(t.rank(apply_permutation(p, b)));
  };
  std::vector<std::uint64_t> img;
  auto take = [&](const Permutation& p) {
    image_ranks(p, img);
    for (std::uint64_t r : img)
      if (!covered[r]) {
        covered[r] = 1;
        --remaining;
      }
    chosen.push_back(p);
  };

  take(identity_permutation(n));
  std::vector<std::uint64_t> uncovered;
  while (remaining > 0) {
    uncovered.clear();
    for (std::uint64_t r = 0; r < total; ++r)
      if (!covered[r]) uncovered.push_back(r);

    std::vector<Permutation> cands;
    for (int k = 0; k < options.random_candidates; ++k) {
      Permutation p = identity_permutation(n);
      std::shuffle(p.begin(), p.end(), rng);
      cands.push_back(std::move(p));
    }
    // Heuristic candidates: the lowest uncovered vector first, then random uncovered ones,
    // each carried from a random base vector.
    for (int k = 0; k < std::max(1, options.heuristic_candidates); ++k) {
      std::uint64_t target = k == 0 ? uncovered.front() : uncovered[rng() % uncovered.size()];
      const Word& b = base_words[rng() % base_words.size()];
      cands.push_back(carry_onto(b, t.unrank(target), t.alphabet_size(), rng));
    }

    std::size_t best = 0;
    std::uint64_t best_gain = 0;
    for (std::size_t c = 0; c < cands.size(); ++c) {
      image_ranks(cands[c], img);
      std::uint64_t gain = 0;
      for (std::uint64_t r : img) gain += covered[r] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    take(cands[best]);
  }

  if (options.prune_redundant && chosen.size() > 1) {
    // Reverse delete: drop any non-identity permutation whose image is covered by the rest.
    std::vector<std::uint32_t> mult(total, 0);
    std::vector<std::vector<std::uint64_t>> images(chosen.size());
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      image_ranks(chosen[k], images[k]);
      for (std::uint64_t r : images[k]) ++mult[r];
    }
    std::vector<char> keep(chosen.size(), 1);
    for (std::size_t k = chosen.size() - 1; k >= 1; --k) {
      bool redundant = std::all_of(images[k].begin(), images[k].end(), [&](std::uint64_t r) { return mult[r] >= 2; });
      if (redundant) {
        keep[k] = 0;
        for (std::uint64_t r : images[k]) --mult[r];
      }
    }
    std::vector<Permutation> kept;
    for (std::size_t k = 0; k < chosen.size(); ++k)
      if (keep[k]) kept.push_back(std::move(chosen[k]));
    chosen = std::move(kept);
  }

  PermutationCover cover;
  cover.type = t;
  cover.base = std::move(base);
  cover.seed = seed;
  cover.permutations = std::move(chosen);
  constexpr std::uint32_t kUnset = ~0u;
  cover.first_cover.assign(total, kUnset);
  for (std::size_t k = 0; k < cover.permutations.size(); ++k) {
    image_ranks(cover.permutations[k], img);
    for (std::uint64_t r : img)
      if (cover.first_cover[r] == kUnset) cover.first_cover[r] = static_cast<std::uint32_t>(k);
  }
  return cover;
}

double small_set_mass(const PermutationCover& cover, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
  std::uint64_t mass = 0;
  for (std::uint64_t s : cover.exclusive_sizes())
    if (static_cast<double>(s) <= threshold) mass += s;
  return static_cast<double>(mass) / static_cast<double>(cover.first_cover.size());
}

}  // namespace secrd
