#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "secrd/system.hpp"

namespace secrd {

struct Estimate {
  Word z;
  double probability = 0.0;  // success probability given the observation
  bool exhaustive = true;    // false: best over a candidate list, a lower bound on the optimum
};

// Per-letter map w -> lowest z with d_E(x, z) <= d_L(x, w) for all x.
class LeniencyMap {
 public:
  // Throws std::invalid_argument naming the first w without a dominating z.
  LeniencyMap(const DistortionMatrix& d_e, const DistortionMatrix& d_l);
  static LeniencyMap identity(std::size_t alphabet);

  Word apply(std::span<const Symbol> w) const;
  const std::vector<Symbol>& table() const { return table_; }

 private:
  LeniencyMap() = default;
  std::vector<Symbol> table_;
};

struct AttackLimits {
  double exhaustive_bits = 20.0;           // z-search over Z^n when n log2|Z| is at most this
  std::uint64_t max_pairs = 20'000'000;    // source blocks times keys enumerated exactly
};

// Maximum-posterior-success estimator for every cryptogram of a system.
class OptimalAdversary {
 public:
  OptimalAdversary(const CipherSystem& system, const DistortionMatrix& d_e, double level, const LeniencyMap& witness,
                   const AttackLimits& limits = {});

  // Throws std::out_of_range for a cryptogram the system never emits.
  const Estimate& estimate(const Cryptogram& y) const;
  double success() const { return success_; }
  bool exhaustive() const { return exhaustive_; }
  std::size_t cryptogram_count() const { return table_.size(); }

 private:
  std::map<Cryptogram, Estimate> table_;
  double success_ = 0.0;
  bool exhaustive_ = true;
};

// Decodes with a guessed key and maps the reproduction into Z^n.
class KeyAttack {
 public:
  KeyAttack(const CipherSystem& system, const LeniencyMap& witness) : system_(&system), witness_(witness) {}

  Word estimate(const Cryptogram& y, std::uint64_t guess) const;
  Word estimate(const Cryptogram& y, std::mt19937_64& rng) const;

  // Exact success over uniform source, key and guess. Uses the XOR reduction when the system allows it.
  double exact_success(const DistortionMatrix& d_e, double level, const AttackLimits& limits = {}) const;
  // Same quantity by enumerating every (source, key, guess) triple.
  double exact_success_full(const DistortionMatrix& d_e, double level, const AttackLimits& limits = {}) const;

 private:
  const CipherSystem* system_;
  LeniencyMap witness_;
};

// Number of x in the type class of `source` with d_E(x, z) <= n * level, for any z with counts z_counts.
std::uint64_t count_within(const EmpiricalType& source, const std::vector<int>& z_counts, const DistortionMatrix& d_e,
                           double level);

// Best z ignoring the cryptogram, X uniform on the type class. Searches z-types and returns
// the lexicographically smallest optimal vector.
Estimate blind_estimate(const EmpiricalType& q, const DistortionMatrix& d_e, double level);

// Probability of the type class of q under i.i.d. p.
double type_probability(const EmpiricalType& q, const Distribution& p);

// Blind guessing that is told the source type: sum_Q P[T(Q)] * blind(Q).
double type_aware_blind_success(int n, const Distribution& p, const DistortionMatrix& d_e, double level);

// Blind guessing with a uniformly guessed type in place of the true one.
struct TypeGuessResult {
  double correct_guess_term = 0.0;  // contribution of correct guesses
  double total = 0.0;
  std::size_t type_count = 0;
};
TypeGuessResult random_type_guess_success(int n, const Distribution& p, const DistortionMatrix& d_e, double level);

}  // namespace secrd
