#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secrd/finite_info.hpp"

namespace secrd {

// Lexicographic index of z in Z^n (first symbol most significant).
std::uint64_t word_index(std::span<const Symbol> z, std::size_t alphabet);
Word index_word(std::uint64_t index, int n, std::size_t alphabet);
double index_bits(int n, std::size_t alphabet);  // n * log2 |Z|

// Calls f(z) for every z with total d(x, z) <= n * level, in lexicographic order.
template <class F>
void for_each_within(std::span<const Symbol> x, const DistortionMatrix& d, double level, F&& f) {
  const int n = static_cast<int>(x.size());
  const double budget = n * level + kDistortionSlack;
  Word z(x.size());
  auto rec = [&](auto&& self, int pos, double used) -> void {
    if (pos == n) {
      f(static_cast<const Word&>(z));
      return;
    }
    for (std::size_t s = 0; s < d.repro_size(); ++s) {
      double u = used + d(x[static_cast<std::size_t>(pos)], static_cast<Symbol>(s));
      if (u > budget) continue;
      z[static_cast<std::size_t>(pos)] = static_cast<Symbol>(s);
      self(self, pos + 1, u);
    }
  };
  rec(rec, 0, 0.0);
}

struct BestReproduction {
  Word z;
  std::uint64_t index = 0;
  std::uint64_t weight = 0;  // total weight of xs within the level of z
  bool exhaustive = true;
};

// Reusable scorer for exact argmax searches at a fixed (n, d, level).
class ReproductionScorer {
 public:
  ReproductionScorer(int n, const DistortionMatrix& d, double level, double cap_bits = 20.0);
  BestReproduction best(const std::vector<Word>& xs, const std::vector<std::uint64_t>& weights);

 private:
  int n_;
  const DistortionMatrix* d_;
  double level_;
  std::vector<std::uint64_t> acc_;
  std::vector<std::uint64_t> touched_;
};

// Exact argmax over all z in Z^n of the weight of xs within the level; lowest index on
// ties. Refuses (CapExceeded) when n * log2 |Z| exceeds cap_bits.
BestReproduction best_reproduction(const std::vector<Word>& xs, const std::vector<std::uint64_t>& weights,
                                   const DistortionMatrix& d, double level, double cap_bits = 20.0);

// Best among an explicit candidate list; lowest position on ties. exhaustive = false.
BestReproduction best_among(const std::vector<Word>& xs, const std::vector<std::uint64_t>& weights,
                            const std::vector<Word>& candidates, const DistortionMatrix& d, double level);

}  // namespace secrd
