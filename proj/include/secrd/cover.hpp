#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "secrd/finite_info.hpp"
#include "secrd/type_class.hpp"

namespace secrd {

// Source vectors of a type class reproducible within d_c by some codeword.
struct DCover {
  std::vector<std::uint64_t> ranks;     // sorted ascending
  std::vector<std::uint32_t> codeword;  // lowest achieving codeword index, parallel to ranks
  std::uint64_t multiply_covered = 0;   // members within d_c of two or more codewords

  std::size_t size() const { return ranks.size(); }
  bool contains(std::uint64_t rank) const;
};

DCover d_cover(const std::vector<Word>& codewords, const TypeClass& t, const DistortionMatrix& d_l, double d_c,
               const EnumerationCap& cap = {});

// out[i] = x[perm[i]].
using Permutation = std::vector<int>;
Word apply_permutation(const Permutation& perm, std::span<const Symbol> x);
Permutation identity_permutation(int n);
bool is_permutation(const Permutation& perm);

struct CoverOptions {
  int random_candidates = 64;
  int heuristic_candidates = 8;
  bool prune_redundant = true;
  EnumerationCap cap;
};

struct PermutationCover {
  TypeClass type;
  std::vector<std::uint64_t> base;          // sorted ranks
  std::vector<Permutation> permutations;    // permutations[0] is the identity
  std::vector<std::uint32_t> first_cover;   // indexed by rank: lowest t covering it
  std::uint64_t seed = 0;

  std::size_t count() const { return permutations.size(); }
  std::vector<std::vector<std::uint64_t>> exclusive_sets() const;
  std::vector<std::uint64_t> exclusive_sizes() const;
  double lower_bound() const;     // |T| / |base|
  double covering_bound() const;  // (|T| / |base|) * log2 |T|
  double bound_overshoot() const; // count - covering_bound, when positive
};

PermutationCover cover_with_permutations(std::vector<std::uint64_t> base, const TypeClass& t, std::uint64_t seed,
                                         const CoverOptions& options = {});

// Fraction of the class lying in exclusive sets of size <= threshold.
double small_set_mass(const PermutationCover& cover, double threshold);

}  // namespace secrd
