#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "secrd/secure_code.hpp"

namespace secrd {

// Patterns over {0} ∪ X: 0 keeps the original symbol, v > 0 stands for symbol v - 1.
// Ranked by (number of nonzero entries, lexicographic).
class HammingBall {
 public:
  HammingBall() = default;
  HammingBall(int length, int radius, std::size_t alphabet);

  int length() const { return length_; }
  int radius() const { return radius_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(std::span<const Symbol> pattern) const;
  Word unrank(std::uint64_t index) const;

 private:
  // Patterns of the given length with exactly `weight` nonzero entries.
  std::uint64_t count(int length, int weight) const;

  int length_ = 0;
  int radius_ = 0;
  std::size_t alphabet_ = 0;
  std::uint64_t size_ = 0;
};

// out[i] = x[i] where pattern[i] == 0, pattern[i] - 1 elsewhere.
Word replace_symbols(std::span<const Symbol> x, std::span<const Symbol> pattern);

// Interior types of denominator n0 (every count positive), lexicographic by counts.
std::vector<EmpiricalType> grid_types(int n0, std::size_t alphabet);

double l1_distance(const Distribution& a, const Distribution& b);

// Index of the grid type closest in L1 to q; lowest index on ties.
std::size_t nearest_grid_type(const EmpiricalType& q, const std::vector<EmpiricalType>& grid);

// Sequential key bits. Seeded streams are reproducible; explicit streams read given bits.
class KeyStream {
 public:
  explicit KeyStream(std::uint64_t seed) : rng_(seed) {}
  explicit KeyStream(std::vector<bool> bits) : bits_(std::move(bits)), fixed_(true) {}

  // Next `width` bits, first bit least significant. Throws std::out_of_range past a fixed stream's end.
  std::uint64_t take(int width);
  std::size_t consumed() const { return pos_; }

 private:
  bool next_bit();

  std::mt19937_64 rng_;
  std::vector<bool> bits_;
  bool fixed_ = false;
  std::size_t pos_ = 0;
};

struct GridConfig {
  int n0 = 4;
  double epsilon = 0.5;
  int n = 0;
  double key_rate = 0.0;
  DistortionMatrix d_l;
  double d_c = 0.0;
  DistortionMatrix d_e;
  double r_c = 1.0;
  double delta = 0.05;
  std::vector<double> probe_distortions;
  std::uint64_t seed = 0;
  int max_retries = 16;
  CoverOptions cover;
  EnumerationCap cap;
  unsigned threads = 1;
};

struct KeyWidths {
  int tail = 0;         // u(2)
  int replacement = 0;  // u(3)
  int randomizer = 0;   // selects the replacement pattern
  int inner = 0;        // u(4)
  int total() const { return tail + replacement + randomizer + inner; }
};

class GridCode {
 public:
  const GridConfig& config() const { return config_; }
  int truncated_length() const { return truncated_; }
  const std::vector<EmpiricalType>& grid() const { return grid_; }
  const std::vector<std::vector<int>>& raw_types() const { return raw_types_; }
  const HammingBall& ball() const { return ball_; }
  const std::optional<SingleTypeCode>& grid_code(std::size_t g) const { return codes_[g]; }

  std::size_t type_index(std::span<const Symbol> x) const;
  bool covered(std::size_t raw) const { return covered_[raw]; }
  std::size_t assigned_grid(std::size_t raw) const { return assigned_[raw]; }
  double legit_rate(std::size_t raw) const { return legit_rates_[raw]; }
  double assignment_distance(std::size_t raw) const;

  int type_width() const { return type_width_; }
  // Key bits consumed for a source vector; zero for uncovered types.
  KeyWidths key_widths(std::span<const Symbol> x) const;
  // Largest key consumption and cryptogram width over all source vectors, bits.
  int max_key_bits() const;
  int max_cryptogram_bits() const;

  // Covered types: parts (type, tail, replacement, permutation, codeword). Uncovered: (type).
  Cryptogram encode(std::span<const Symbol> x, KeyStream& key) const;
  Word decode(const Cryptogram& y, KeyStream& key) const;

  // Size of the replacement set for a prefix type and target grid index.
  std::size_t replacement_set_size(const std::vector<int>& prefix_counts, std::size_t grid_index) const;

 private:
  friend GridCode build_grid_code(const GridConfig& config);
  const std::vector<std::uint32_t>& replacement_set(const std::vector<int>& prefix_counts, std::size_t g) const;

  GridConfig config_;
  int truncated_ = 0;
  int tail_width_ = 0;
  int type_width_ = 0;
  std::vector<EmpiricalType> grid_;
  std::vector<std::optional<SingleTypeCode>> codes_;
  std::vector<std::vector<int>> raw_types_;
  std::map<std::vector<int>, std::size_t> raw_index_;
  std::vector<char> covered_;
  std::vector<std::size_t> assigned_;
  std::vector<double> legit_rates_;
  HammingBall ball_;
  // (prefix counts, grid index) -> ball ranks of patterns valid for the sorted prefix
  std::map<std::pair<std::vector<int>, std::size_t>, std::vector<std::uint32_t>> replacement_sets_;
};

// Refuses (std::invalid_argument) unless n > max(n0, n0*epsilon + 2*n0*|X|) and every
// reachable prefix of a covered type has a nonempty replacement set.
GridCode build_grid_code(const GridConfig& config);

// g(epsilon) = h_b(epsilon/2) + (epsilon/2) log2|X|.
double ball_exponent(double epsilon, std::size_t alphabet);

}  // namespace secrd
