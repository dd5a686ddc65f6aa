#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "secrd/cryptogram.hpp"
#include "secrd/finite_info.hpp"
#include "secrd/secure_code.hpp"

namespace secrd {

// A cipher over a finite source ensemble: X uniform over source_count() blocks, key
// uniform over [0, 2^key_width).
class CipherSystem {
 public:
  virtual ~CipherSystem() = default;
  virtual int block_length() const = 0;
  virtual int key_width() const = 0;
  virtual std::uint64_t source_count() const = 0;
  virtual Word source_block(std::uint64_t index) const = 0;
  virtual Cryptogram encode(std::span<const Symbol> x, std::uint64_t key) const = 0;
  virtual Word decode(const Cryptogram& y, std::uint64_t key) const = 0;
  // True when decode(encode(x, u), v) depends on (u, v) only through u XOR v.
  virtual bool key_enters_by_xor() const = 0;
  // Set when the ensemble is a single type class.
  virtual std::optional<EmpiricalType> source_type() const { return std::nullopt; }
};

class SingleTypeSystem : public CipherSystem {
 public:
  explicit SingleTypeSystem(const SingleTypeCode& code) : code_(&code) {}

  int block_length() const override { return code_->length(); }
  int key_width() const override { return code_->key_width(); }
  std::uint64_t source_count() const override { return code_->source_class().size(); }
  Word source_block(std::uint64_t index) const override { return code_->source_class().unrank(index); }
  Cryptogram encode(std::span<const Symbol> x, std::uint64_t key) const override { return code_->encode(x, key); }
  Word decode(const Cryptogram& y, std::uint64_t key) const override { return code_->decode(y, key); }
  bool key_enters_by_xor() const override { return true; }
  std::optional<EmpiricalType> source_type() const override { return code_->source_class().type(); }

 private:
  const SingleTypeCode* code_;
};

// Every bit of a uniform binary block XORed with one shared key bit.
class XorOneBitCode : public CipherSystem {
 public:
  explicit XorOneBitCode(int n);

  int block_length() const override { return n_; }
  int key_width() const override { return 1; }
  std::uint64_t source_count() const override { return 1ULL << n_; }
  Word source_block(std::uint64_t index) const override;
  Cryptogram encode(std::span<const Symbol> x, std::uint64_t key) const override;
  Word decode(const Cryptogram& y, std::uint64_t key) const override;
  bool key_enters_by_xor() const override { return true; }

 private:
  int n_;
};

}  // namespace secrd
