#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "secrd/finite_info.hpp"

namespace secrd {

struct EnumerationCap {
  int max_length = 24;
  std::uint64_t max_elements = 10'000'000;
};

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, int needed_length, std::uint64_t needed_elements)
      : std::runtime_error(what), needed_length_(needed_length), needed_elements_(needed_elements) {}
  int needed_length() const { return needed_length_; }
  std::uint64_t needed_elements() const { return needed_elements_; }

 private:
  int needed_length_;
  std::uint64_t needed_elements_;
};

// The set of length-n vectors with a given empirical type, ranked lexicographically.
class TypeClass {
 public:
  TypeClass() = default;
  explicit TypeClass(EmpiricalType type);

  const EmpiricalType& type() const { return type_; }
  int length() const { return type_.n; }
  std::size_t alphabet_size() const { return type_.counts.size(); }

  // Exact size; throws std::overflow_error past 2^64 - 1.
  std::uint64_t size() const;
  double log2_size() const;

  bool contains(std::span<const Symbol> x) const;
  std::uint64_t rank(std::span<const Symbol> x) const;
  Word unrank(std::uint64_t index) const;
  Word first() const;

  void require_enumerable(const EnumerationCap& cap) const;
  std::vector<Word> enumerate(const EnumerationCap& cap = {}) const;

  // Calls f(rank, word) over the class in lexicographic order.
  template <class F>
  void for_each(F&& f, const EnumerationCap& cap = {}) const {
    require_enumerable(cap);
    Word x = first();
    std::uint64_t r = 0;
    do {
      f(r++, static_cast<const Word&>(x));
    } while (next_word(x));
  }

  bool operator==(const TypeClass& o) const { return type_ == o.type_; }

 private:
  static bool next_word(Word& x);

  EmpiricalType type_;
  std::uint64_t size_ = 0;
  bool overflow_ = false;
};

}  // namespace secrd
