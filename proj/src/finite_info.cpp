#include "secrd/finite_info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace secrd {

namespace {

double plogp_ratio(double a, double b) {
  if (a <= 0.0) return 0.0;
  if (b <= 0.0) return kInfinity;
  return a * std::log2(a / b);
}

std::optional<Symbol> dominating_symbol(const DistortionMatrix& d_e, const DistortionMatrix& d_l, Symbol w) {
  for (std::size_t z = 0; z < d_e.repro_size(); ++z) {
    bool dominates = true;
    for (std::size_t x = 0; x < d_l.source_size() && dominates; ++x)
      dominates = d_e(static_cast<Symbol>(x), static_cast<Symbol>(z)) <= d_l(static_cast<Symbol>(x), w);
    if (dominates) return static_cast<Symbol>(z);
  }
  return std::nullopt;
}

void check_symbols(std::span<const Symbol> x, std::size_t alphabet, const char* what) {
  for (Symbol s : x) {
    if (s < 0 || static_cast<std::size_t>(s) >= alphabet)
      throw std::invalid_argument(std::string(what) + ": symbol " + std::to_string(s) +
                                  " outside alphabet of size " + std::to_string(alphabet));
  }
}

}  // namespace

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("distribution over empty alphabet");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("distribution entry must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance)
    throw std::invalid_argument("distribution sums to " + std::to_string(sum) + ", not 1");
}

Distribution Distribution::renormalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("weight must be finite and >= 0");
    sum += w;
  }
  if (sum <= 0.0) throw std::invalid_argument("cannot renormalize all-zero weights");
  for (double& w : weights) w /= sum;
  // Push the rounding residue into the largest entry so the sum is 1 to machine precision.
  double resid = 1.0 - std::accumulate(weights.begin(), weights.end(), 0.0);
  *std::max_element(weights.begin(), weights.end()) += resid;
  return Distribution(std::move(weights));
}

Distribution Distribution::uniform(std::size_t alphabet_size) {
  return renormalized(std::vector<double>(alphabet_size, 1.0));
}

Distribution Distribution::point_mass(std::size_t alphabet_size, std::size_t symbol) {
  std::vector<double> p(alphabet_size, 0.0);
  p.at(symbol) = 1.0;
  return Distribution(std::move(p));
}

std::size_t Distribution::support_size() const {
  return static_cast<std::size_t>(std::count_if(probs_.begin(), probs_.end(), [](double p) { return p > 0.0; }));
}

EmpiricalType::EmpiricalType(std::vector<int> c) : counts(std::move(c)) {
  if (counts.empty()) throw std::invalid_argument("type over empty alphabet");
  n = 0;
  for (int v : counts) {
    if (v < 0) throw std::invalid_argument("negative type count");
    n += v;
  }
}

Distribution EmpiricalType::as_distribution() const {
  if (n <= 0) throw std::invalid_argument("type with n = 0 has no distribution");
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / n;
  return Distribution::renormalized(std::move(p));
}

EmpiricalType nearest_type(const Distribution& q, int n) {
  if (n <= 0) throw std::invalid_argument("block length must be positive");
  std::vector<int> counts(q.size());
  std::vector<std::pair<double, std::size_t>> rem;
  int assigned = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double exact = q[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    rem.emplace_back(exact - counts[i], i);
  }
  // Largest remainder first; lower index wins ties.
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[rem[k % rem.size()].second];
  return EmpiricalType(std::move(counts));
}

JointDistribution::JointDistribution(std::size_t rows, std::size_t cols, std::vector<double> probs)
    : rows_(rows), cols_(cols), probs_(std::move(probs)) {
  if (probs_.size() != rows_ * cols_ || rows_ == 0 || cols_ == 0)
    throw std::invalid_argument("joint distribution shape mismatch");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("joint entry must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance)
    throw std::invalid_argument("joint distribution sums to " + std::to_string(sum) + ", not 1");
}

JointDistribution JointDistribution::product(const Distribution& a, const Distribution& b) {
  std::vector<double> p(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) p[i * b.size() + j] = a[i] * b[j];
  return JointDistribution(a.size(), b.size(), std::move(p));
}

JointDistribution JointDistribution::from_channel(const Distribution& px,
                                                  const std::vector<std::vector<double>>& channel) {
  if (channel.size() != px.size() || channel.empty()) throw std::invalid_argument("channel row count mismatch");
  std::size_t cols = channel.front().size();
  std::vector<double> p(px.size() * cols);
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (channel[i].size() != cols) throw std::invalid_argument("ragged channel");
    for (std::size_t j = 0; j < cols; ++j) p[i * cols + j] = px[i] * channel[i][j];
  }
  return JointDistribution(px.size(), cols, std::move(p));
}

Distribution JointDistribution::row_marginal() const {
  std::vector<double> m(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m[r] += (*this)(r, c);
  return Distribution::renormalized(std::move(m));
}

Distribution JointDistribution::col_marginal() const {
  std::vector<double> m(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m[c] += (*this)(r, c);
  return Distribution::renormalized(std::move(m));
}

DistortionMatrix::DistortionMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ == 0 || cols_ == 0 || values_.size() != rows_ * cols_)
    throw std::invalid_argument("distortion matrix shape mismatch");
  for (std::size_t r = 0; r < rows_; ++r) {
    bool has_zero = false;
    for (std::size_t c = 0; c < cols_; ++c) {
      double v = values_[r * cols_ + c];
      if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument("distortion entry (" + std::to_string(r) + "," + std::to_string(c) +
                                    ") must be finite and >= 0");
      has_zero = has_zero || v == 0.0;
    }
    if (!has_zero) throw std::invalid_argument("distortion row " + std::to_string(r) + " has no zero entry");
  }
}

DistortionMatrix::DistortionMatrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("empty distortion matrix");
  std::vector<double> flat;
  for (const auto& row : rows) {
    if (row.size() != rows.front().size()) throw std::invalid_argument("ragged distortion matrix");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  *this = DistortionMatrix(rows.size(), rows.front().size(), std::move(flat));
}

DistortionMatrix DistortionMatrix::hamming(std::size_t k) {
  std::vector<double> v(k * k, 1.0);
  for (std::size_t i = 0; i < k; ++i) v[i * k + i] = 0.0;
  return DistortionMatrix(k, k, std::move(v));
}

DistortionMatrix DistortionMatrix::zero(std::size_t rows, std::size_t cols) {
  return DistortionMatrix(rows, cols, std::vector<double>(rows * cols, 0.0));
}

std::vector<std::vector<double>> DistortionMatrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    out[r].assign(values_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  values_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  return out;
}

Symbol DistortionMatrix::zero_repro(Symbol x) const {
  for (std::size_t c = 0; c < cols_; ++c)
    if ((*this)(x, static_cast<Symbol>(c)) == 0.0) return static_cast<Symbol>(c);
  throw std::logic_error("row without zero entry");
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy(const Distribution& q) {
  double h = 0.0;
  for (double p : q.probs())
    if (p > 0.0) h -= p * std::log2(p);
  return std::max(h, 0.0);
}

double kl_divergence(const Distribution& q, const Distribution& p) {
  if (q.size() != p.size()) throw std::invalid_argument("divergence over different alphabets");
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    double t = plogp_ratio(q[i], p[i]);
    if (std::isinf(t)) return kInfinity;
    d += t;
  }
  return std::max(d, 0.0);
}

double binary_divergence(double q, double p) {
  double a = plogp_ratio(q, p);
  double b = plogp_ratio(1.0 - q, 1.0 - p);
  if (std::isinf(a) || std::isinf(b)) return kInfinity;
  return std::max(a + b, 0.0);
}

double mutual_information(const JointDistribution& j) {
  Distribution a = j.row_marginal();
  Distribution b = j.col_marginal();
  double mi = 0.0;
  for (std::size_t r = 0; r < j.rows(); ++r)
    for (std::size_t c = 0; c < j.cols(); ++c) {
      double v = j(r, c);
      if (v > 0.0) mi += v * std::log2(v / (a[r] * b[c]));
    }
  return std::max(mi, 0.0);
}

double total_distortion(std::span<const Symbol> x, std::span<const Symbol> z, const DistortionMatrix& d) {
  if (x.size() != z.size()) throw std::invalid_argument("distortion between vectors of different length");
  check_symbols(x, d.source_size(), "source vector");
  check_symbols(z, d.repro_size(), "reproduction vector");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += d(x[i], z[i]);
  return s;
}

double avg_distortion(std::span<const Symbol> x, std::span<const Symbol> z, const DistortionMatrix& d) {
  if (x.empty()) throw std::invalid_argument("distortion of empty vectors");
  return total_distortion(x, z, d) / static_cast<double>(x.size());
}

EmpiricalType empirical_type(std::span<const Symbol> x, std::size_t alphabet_size) {
  if (x.empty()) throw std::invalid_argument("empirical type of an empty vector");
  check_symbols(x, alphabet_size, "empirical_type");
  std::vector<int> counts(alphabet_size, 0);
  for (Symbol s : x) ++counts[static_cast<std::size_t>(s)];
  return EmpiricalType(std::move(counts));
}

JointDistribution empirical_joint(std::span<const Symbol> x, std::span<const Symbol> z,
                                  std::size_t x_alphabet, std::size_t z_alphabet) {
  if (x.size() != z.size() || x.empty()) throw std::invalid_argument("joint type needs equal nonzero lengths");
  check_symbols(x, x_alphabet, "joint type source");
  check_symbols(z, z_alphabet, "joint type reproduction");
  std::vector<double> counts(x_alphabet * z_alphabet, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    counts[static_cast<std::size_t>(x[i]) * z_alphabet + static_cast<std::size_t>(z[i])] += 1.0;
  for (double& c : counts) c /= static_cast<double>(x.size());
  return JointDistribution(x_alphabet, z_alphabet, std::move(counts));
}

double expected_distortion(const JointDistribution& j, const DistortionMatrix& d) {
  if (j.rows() != d.source_size() || j.cols() != d.repro_size())
    throw std::invalid_argument("joint and distortion shapes differ");
  double s = 0.0;
  for (std::size_t r = 0; r < j.rows(); ++r)
    for (std::size_t c = 0; c < j.cols(); ++c) s += j(r, c) * d(static_cast<Symbol>(r), static_cast<Symbol>(c));
  return s;
}

std::optional<std::vector<Symbol>> leniency_witness(const DistortionMatrix& d_e, const DistortionMatrix& d_l) {
  if (d_e.source_size() != d_l.source_size()) throw std::invalid_argument("leniency needs a shared source alphabet");
  std::vector<Symbol> map(d_l.repro_size());
  for (std::size_t w = 0; w < d_l.repro_size(); ++w) {
    auto z = dominating_symbol(d_e, d_l, static_cast<Symbol>(w));
    if (!z) return std::nullopt;
    map[w] = *z;
  }
  return map;
}

std::optional<Symbol> leniency_violation(const DistortionMatrix& d_e, const DistortionMatrix& d_l) {
  if (d_e.source_size() != d_l.source_size()) throw std::invalid_argument("leniency needs a shared source alphabet");
  for (std::size_t w = 0; w < d_l.repro_size(); ++w)
    if (!dominating_symbol(d_e, d_l, static_cast<Symbol>(w))) return static_cast<Symbol>(w);
  return std::nullopt;
}

bool is_more_lenient(const DistortionMatrix& d_e, const DistortionMatrix& d_l) {
  return !leniency_violation(d_e, d_l).has_value();
}

}  // namespace secrd
