#include "secrd/type_class.hpp"

#include <algorithm>
#include <stdexcept>

#include "secrd/combinatorics.hpp"

namespace secrd {

TypeClass::TypeClass(EmpiricalType type) : type_(std::move(type)) {
  if (type_.n <= 0) throw std::invalid_argument("type class needs n >= 1");
  try {
    size_ = multinomial(type_.counts);
  } catch (const std::overflow_error&) {
    overflow_ = true;
  }
}

std::uint64_t TypeClass::size() const {
  if (overflow_) throw std::overflow_error("type class size exceeds 64 bits");
  return size_;
}

double TypeClass::log2_size() const { return log2_multinomial(type_.counts); }

bool TypeClass::contains(std::span<const Symbol> x) const {
  if (static_cast<int>(x.size()) != type_.n) return false;
  std::vector<int> c(type_.counts.size(), 0);
  for (Symbol s : x) {
    if (s < 0 || static_cast<std::size_t>(s) >= c.size()) return false;
    ++c[static_cast<std::size_t>(s)];
  }
  return c == type_.counts;
}

std::uint64_t TypeClass::rank(std::span<const Symbol> x) const {
  if (!contains(x)) throw std::invalid_argument("vector is not in the type class");
  std::vector<int> rem = type_.counts;
  u128 block = size();  // members sharing the prefix decided so far
  std::uint64_t r = 0;
  int left = type_.n;
  for (Symbol s : x) {
    for (Symbol a = 0; a < s; ++a) {
      int ca = rem[static_cast<std::size_t>(a)];
      if (ca > 0) r += static_cast<std::uint64_t>(block * static_cast<unsigned>(ca) / static_cast<unsigned>(left));
    }
    block = block * static_cast<unsigned>(rem[static_cast<std::size_t>(s)]) / static_cast<unsigned>(left);
    --rem[static_cast<std::size_t>(s)];
    --left;
  }
  return r;
}

Word TypeClass::unrank(std::uint64_t index) const {
  if (index >= size()) throw std::out_of_range("index outside the type class");
  std::vector<int> rem = type_.counts;
  u128 block = size_;
  Word x(static_cast<std::size_t>(type_.n));
  int left = type_.n;
  for (int i = 0; i < type_.n; ++i) {
    for (std::size_t a = 0; a < rem.size(); ++a) {
      if (rem[a] == 0) continue;
      std::uint64_t sub = static_cast<std::uint64_t>(block * static_cast<unsigned>(rem[a]) / static_cast<unsigned>(left));
      if (index < sub) {
        x[static_cast<std::size_t>(i)] = static_cast<Symbol>(a);
        block = sub;
        --rem[a];
        break;
      }
      index -= sub;
    }
    --left;
  }
  return x;
}

Word TypeClass::first() const {
  Word x;
  x.reserve(static_cast<std::size_t>(type_.n));
  for (std::size_t a = 0; a < type_.counts.size(); ++a) x.insert(x.end(), static_cast<std::size_t>(type_.counts[a]), static_cast<Symbol>(a));
  return x;
}

void TypeClass::require_enumerable(const EnumerationCap& cap) const {
  if (type_.n > cap.max_length || overflow_ || size_ > cap.max_elements) {
    std::uint64_t need = overflow_ ? ~0ULL : size_;
    throw CapExceeded("type class of length " + std::to_string(type_.n) + " with " +
                          (overflow_ ? std::string("> 2^64") : std::to_string(size_)) +
                          " elements exceeds the enumeration cap (" + std::to_string(cap.max_length) + " symbols / " +
                          std::to_string(cap.max_elements) + " elements); required cap: " + std::to_string(type_.n) +
                          " symbols / " + std::to_string(need) + " elements",
                      type_.n, need);
  }
}

std::vector<Word> TypeClass::enumerate(const EnumerationCap& cap) const {
  std::vector<Word> out;
  require_enumerable(cap);
  out.reserve(static_cast<std::size_t>(size_));
  for_each([&](std::uint64_t, const Word& x) { out.push_back(x); }, cap);
  return out;
}

bool TypeClass::next_word(Word& x) { return std::next_permutation(x.begin(), x.end()); }

}  // namespace secrd
