#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace secrd {

using u128 = unsigned __int128;

// C(n, k) in 64 bits; throws std::overflow_error when it does not fit.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// n! / prod(counts[i]!) with n = sum(counts); throws std::overflow_error past 2^64 - 1.
std::uint64_t multinomial(std::span<const int> counts);

// log2 of the multinomial coefficient, valid for any size.
double log2_multinomial(std::span<const int> counts);

// Number of bits needed to write any value in [0, count). 0 when count <= 1.
unsigned index_width(std::uint64_t count);

// All compositions of `total` into `parts` nonnegative parts, lexicographic order.
std::vector<std::vector<int>> compositions(int total, int parts);

// Counter-based seed derivation: distinct (stream, index) pairs give decorrelated seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace secrd
