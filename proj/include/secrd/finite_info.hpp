#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace secrd {

using Symbol = int;
using Word = std::vector<Symbol>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kNormalizationTolerance = 1e-12;

class Distribution {
 public:
  Distribution() = default;
  // Rejects negative entries and sums further than 1e-12 from one.
  explicit Distribution(std::vector<double> probs);

  static Distribution renormalized(std::vector<double> weights);
  static Distribution uniform(std::size_t alphabet_size);
  static Distribution point_mass(std::size_t alphabet_size, std::size_t symbol);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t support_size() const;

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> probs_;
};

struct EmpiricalType {
  std::vector<int> counts;
  int n = 0;

  EmpiricalType() = default;
  explicit EmpiricalType(std::vector<int> counts);

  std::size_t alphabet_size() const { return counts.size(); }
  Distribution as_distribution() const;

  bool operator==(const EmpiricalType&) const = default;
};

// Largest-remainder rounding of a distribution to an n-type.
EmpiricalType nearest_type(const Distribution& q, int n);

class JointDistribution {
 public:
  JointDistribution() = default;
  JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> probs);

  static JointDistribution product(const Distribution& a, const Distribution& b);
  // Joint of px with conditional rows channel[x][w].
  static JointDistribution from_channel(const Distribution& px,
                                        const std::vector<std::vector<double>>& channel);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return probs_[r * cols_ + c]; }
  const std::vector<double>& probs() const { return probs_; }

  Distribution row_marginal() const;
  Distribution col_marginal() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> probs_;
};

class DistortionMatrix {
 public:
  DistortionMatrix() = default;
  // Every entry finite and >= 0, every row with at least one zero.
  DistortionMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);
  DistortionMatrix(const std::vector<std::vector<double>>& rows);

  static DistortionMatrix hamming(std::size_t alphabet_size);
  static DistortionMatrix zero(std::size_t rows, std::size_t cols);

  std::size_t source_size() const { return rows_; }
  std::size_t repro_size() const { return cols_; }
  double operator()(Symbol x, Symbol z) const {
    return values_[static_cast<std::size_t>(x) * cols_ + static_cast<std::size_t>(z)];
  }
  const std::vector<double>& values() const { return values_; }
  std::vector<std::vector<double>> to_rows() const;

  // Lowest-index reproduction with zero distortion for x.
  Symbol zero_repro(Symbol x) const;

  bool operator==(const DistortionMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

double binary_entropy(double p);
double entropy(const Distribution& q);
// +infinity when q puts mass where p has none.
double kl_divergence(const Distribution& q, const Distribution& p);
double binary_divergence(double q, double p);
double mutual_information(const JointDistribution& j);

double avg_distortion(std::span<const Symbol> x, std::span<const Symbol> z, const DistortionMatrix& d);
double total_distortion(std::span<const Symbol> x, std::span<const Symbol> z, const DistortionMatrix& d);
EmpiricalType empirical_type(std::span<const Symbol> x, std::size_t alphabet_size);
JointDistribution empirical_joint(std::span<const Symbol> x, std::span<const Symbol> z,
                                  std::size_t x_alphabet, std::size_t z_alphabet);
double expected_distortion(const JointDistribution& j, const DistortionMatrix& d);

// Per-letter dominance: for every w some z has d_e(x,z) <= d_l(x,w) for all x.
bool is_more_lenient(const DistortionMatrix& d_e, const DistortionMatrix& d_l);
// Map w -> lowest-index dominating z, or nullopt if some w has none.
std::optional<std::vector<Symbol>> leniency_witness(const DistortionMatrix& d_e, const DistortionMatrix& d_l);
// First w lacking a dominating z.
std::optional<Symbol> leniency_violation(const DistortionMatrix& d_e, const DistortionMatrix& d_l);

// Distortion threshold comparisons use this slack on block sums.
inline constexpr double kDistortionSlack = 1e-9;
inline bool within_distortion(double block_sum, int n, double level) {
  return block_sum <= static_cast<double>(n) * level + kDistortionSlack;
}

}  // namespace secrd
