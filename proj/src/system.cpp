#include "secrd/system.hpp"

#include <stdexcept>

#include "secrd/ball_search.hpp"

namespace secrd {

XorOneBitCode::XorOneBitCode(int n) : n_(n) {
  if (n < 1 || n > 62) throw std::invalid_argument("XOR block length must be in [1, 62]");
}

Word XorOneBitCode::source_block(std::uint64_t index) const { return index_word(index, n_, 2); }

Cryptogram XorOneBitCode::encode(std::span<const Symbol> x, std::uint64_t key) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("block length differs from the code");
  if (key > 1) throw std::invalid_argument("key is a single bit");
  const std::uint64_t flip = key ? low_mask(n_) : 0;
  return Cryptogram{{word_index(x, 2) ^ flip}, {n_}};
}

Word XorOneBitCode::decode(const Cryptogram& y, std::uint64_t key) const {
  if (y.parts.size() != 1 || y.widths[0] != n_) throw std::invalid_argument("cryptogram layout does not match the code");
  if (key > 1) throw std::invalid_argument("key is a single bit");
  return index_word(y.parts[0] ^ (key ? low_mask(n_) : 0), n_, 2);
}

}  // namespace secrd
