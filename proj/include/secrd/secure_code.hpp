#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "secrd/cover.hpp"
#include "secrd/cryptogram.hpp"
#include "secrd/finite_info.hpp"
#include "secrd/type_class.hpp"

namespace secrd {

struct CodebookRequest {
  EmpiricalType source_type;
  double key_rate = 0.0;  // bits per symbol; key width is ceil(n * key_rate)
  DistortionMatrix d_l;
  double d_c = 0.0;
  DistortionMatrix d_e;
  std::vector<double> probe_distortions;
  double delta = 0.05;
  std::uint64_t seed = 0;
  int max_retries = 16;
  EnumerationCap cap;
  double exhaustive_bits = 20.0;  // z-search is exhaustive when n log2|Z| is at most this
  int candidate_pool = 512;       // codeword candidates for the full-cover branch
  int max_key_width = 20;
};

// max_z #{x in the D-cover : d_E(x, z) <= D} against the packing bound.
struct ProbeCheck {
  double distortion = 0.0;
  std::uint64_t max_count = 0;
  double ratio = 0.0;  // max_count / cover size
  double bound = 0.0;  // 2^{-n (min(R, R_E(Q, D)) - delta)}
  bool exhaustive = true;
  bool passed = false;
  Word best_z;
};

struct PackingCodebook {
  EmpiricalType source_type;
  EmpiricalType codeword_type;
  double key_rate = 0.0;
  int key_width = 0;
  std::vector<Word> codewords;  // 2^key_width entries
  DCover cover;                 // within the source type class
  bool full_cover = false;      // key rate at least R_L: the codebook covers the whole class
  double legit_rate = 0.0;      // R_L(Q, D_c)
  double cover_target_log2 = 0.0;  // n (E_0 - delta)
  bool cover_passed = false;
  std::vector<ProbeCheck> probes;
  std::uint64_t selection_seed = 0;
  int attempts = 0;

  bool disjoint() const { return cover.multiply_covered == 0; }
  bool invariants_hold() const;
  int invariants_passed() const;
};

// Raised when no attempt meets every packing invariant; carries the best attempt.
class SelectionFailure : public std::runtime_error {
 public:
  SelectionFailure(const std::string& what, PackingCodebook best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const PackingCodebook& best() const { return best_; }

 private:
  PackingCodebook best_;
};

PackingCodebook select_packing_codebook(const CodebookRequest& request);

// Returns the best attempt instead of throwing when the invariants cannot be met.
PackingCodebook select_packing_codebook_or_best(const CodebookRequest& request);

// Probe checks for a codebook's D-cover. Above the exhaustive limit the z candidates are one
// representative per z-type plus the codewords mapped through the leniency witness.
std::vector<ProbeCheck> probe_codebook(const std::vector<Word>& codewords, const DCover& cover, const TypeClass& source,
                                       const CodebookRequest& request);

class SingleTypeCode {
 public:
  SingleTypeCode(PackingCodebook codebook, PermutationCover cover, DistortionMatrix d_l, double d_c);

  const TypeClass& source_class() const { return cover_.type; }
  int length() const { return cover_.type.length(); }
  int key_width() const { return book_.key_width; }
  int permutation_width() const { return permutation_width_; }
  double d_c() const { return d_c_; }
  const DistortionMatrix& d_l() const { return d_l_; }
  const PackingCodebook& codebook() const { return book_; }
  const PermutationCover& cover() const { return cover_; }

  std::uint32_t t_star(std::uint64_t rank) const { return cover_.first_cover[rank]; }
  std::uint32_t i_star(std::uint64_t rank) const { return i_star_[rank]; }

  // Throws std::invalid_argument for a vector outside the class or a key wider than key_width.
  Cryptogram encode(std::span<const Symbol> x, std::uint64_t key) const;
  Word decode(const Cryptogram& y, std::uint64_t key) const;

  // Cryptogram bits per source symbol.
  double rate() const { return static_cast<double>(permutation_width_ + book_.key_width) / length(); }

 private:
  PackingCodebook book_;
  PermutationCover cover_;
  DistortionMatrix d_l_;
  double d_c_;
  int permutation_width_;
  std::vector<std::uint32_t> i_star_;
};

SingleTypeCode build_single_type_code(PackingCodebook codebook, const DistortionMatrix& d_l, double d_c,
                                      std::uint64_t seed, const CoverOptions& options = {});

}  // namespace secrd
