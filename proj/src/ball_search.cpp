#include "secrd/ball_search.hpp"

#include <cmath>
#include <string>

#include "secrd/type_class.hpp"

namespace secrd {

std::uint64_t word_index(std::span<const Symbol> z, std::size_t alphabet) {
  std::uint64_t idx = 0;
  for (Symbol s : z) idx = idx * alphabet + static_cast<std::uint64_t>(s);
  return idx;
}

Word index_word(std::uint64_t index, int n, std::size_t alphabet) {
  Word z(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    z[static_cast<std::size_t>(i)] = static_cast<Symbol>(index % alphabet);
    index /= alphabet;
  }
  return z;
}

double index_bits(int n, std::size_t alphabet) { return n * std::log2(static_cast<double>(alphabet)); }

ReproductionScorer::ReproductionScorer(int n, const DistortionMatrix& d, double level, double cap_bits)
    : n_(n), d_(&d), level_(level) {
  double bits = index_bits(n, d.repro_size());
  if (bits > cap_bits + 1e-12)
    throw CapExceeded("exhaustive reproduction search needs n*log2|Z| = " + std::to_string(bits) +
                          " bits, above the cap of " + std::to_string(cap_bits),
                      n, static_cast<std::uint64_t>(std::ceil(bits)));
  std::uint64_t space = 1;
  for (int i = 0; i < n; ++i) space *= d.repro_size();
  acc_.assign(space, 0);
}

BestReproduction ReproductionScorer::best(const std::vector<Word>& xs, const std::vector<std::uint64_t>& weights) {
  touched_.clear();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const std::uint64_t w = weights.empty() ? 1 : weights[k];
    if (w == 0) continue;
    for_each_within(xs[k], *d_, level_, [&](const Word& z) {
      std::uint64_t idx = word_index(z, d_->repro_size());
      if (acc_[idx] == 0) touched_.push_back(idx);
      acc_[idx] += w;
    });
  }
  BestReproduction out;
  out.index = 0;
  out.weight = 0;
  for (std::uint64_t idx : touched_) {
    if (acc_[idx] > out.weight || (acc_[idx] == out.weight && idx < out.index)) {
      out.weight = acc_[idx];
      out.index = idx;
    }
    acc_[idx] = 0;
  }
  out.z = index_word(out.index, n_, d_->repro_size());
  out.exhaustive = true;
  return out;
}

BestReproduction best_reproduction(const std::vector<Word>& xs, const std::vector<std::uint64_t>& weights,
                                   const DistortionMatrix& d, double level, double cap_bits) {
  if (xs.empty()) throw std::invalid_argument("best_reproduction needs at least one source vector");
  ReproductionScorer scorer(static_cast<int>(xs.front().size()), d, level, cap_bits);
  return scorer.best(xs, weights);
}

BestReproduction best_among(const std::vector<Word>& xs, const std::vector<std::uint64_t>& weights,
                            const std::vector<Word>& candidates, const DistortionMatrix& d, double level) {
  BestReproduction out;
  out.exhaustive = false;
  bool first = true;
  for (const Word& z : candidates) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < xs.size(); ++k)
      if (within_distortion(total_distortion(xs[k], z, d), static_cast<int>(z.size()), level))
        acc += weights.empty() ? 1 : weights[k];
    if (first || acc > out.weight) {
      out.weight = acc;
      out.z = z;
      out.index = word_index(z, d.repro_size());
      first = false;
    }
  }
  return out;
}

}  // namespace secrd
