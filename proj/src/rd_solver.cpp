#include "secrd/rd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace secrd {

namespace {

// Problem restricted to the support of q.
struct Reduced {
  std::vector<std::size_t> rows;  // original row index per reduced row
  std::vector<double> p;
  std::size_t cols = 0;
  std::vector<double> dist;  // reduced row-major
};

Reduced reduce(const Distribution& q, const DistortionMatrix& d) {
  if (q.size() != d.source_size()) throw std::invalid_argument("source distribution and distortion matrix disagree");
  Reduced r;
  r.cols = d.repro_size();
  for (std::size_t x = 0; x < q.size(); ++x) {
    if (q[x] <= 0.0) continue;
    r.rows.push_back(x);
    r.p.push_back(q[x]);
    for (std::size_t w = 0; w < r.cols; ++w) r.dist.push_back(d(static_cast<Symbol>(x), static_cast<Symbol>(w)));
  }
  return r;
}

struct Solution {
  std::vector<double> channel;  // reduced rows x cols
  double distortion = 0.0;
  double rate = 0.0;  // bits
  double gap = 0.0;   // bits
  int iterations = 0;
};

double reduced_distortion(const Reduced& r, const std::vector<double>& ch) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.p.size(); ++i)
    for (std::size_t w = 0; w < r.cols; ++w) s += r.p[i] * ch[i * r.cols + w] * r.dist[i * r.cols + w];
  return s;
}

double reduced_rate(const Reduced& r, const std::vector<double>& ch) {
  std::vector<double> out(r.cols, 0.0);
  for (std::size_t i = 0; i < r.p.size(); ++i)
    for (std::size_t w = 0; w < r.cols; ++w) out[w] += r.p[i] * ch[i * r.cols + w];
  double mi = 0.0;
  for (std::size_t i = 0; i < r.p.size(); ++i)
    for (std::size_t w = 0; w < r.cols; ++w) {
      double c = ch[i * r.cols + w];
      if (c > 0.0 && out[w] > 0.0) mi += r.p[i] * c * std::log2(c / out[w]);
    }
  return std::max(mi, 0.0);
}

// Blahut-Arimoto on weights a[x][w] (exp(-s d) for a finite slope, or the indicator of
// zero-distortion cells for D = 0). Stops once the upper/lower bound gap on the rate at
// this slope falls below the tolerance.
Solution blahut_arimoto(const Reduced& r, const std::vector<double>& a, const RdOptions& opt) {
  const std::size_t rows = r.p.size();
  const std::size_t cols = r.cols;
  std::vector<double> out(cols, 1.0 / static_cast<double>(cols));
  std::vector<double> z(rows), c(cols);
  Solution sol;
  const double ln2 = std::log(2.0);
  for (int it = 1; it <= opt.max_iterations; ++it) {
    for (std::size_t i = 0; i < rows; ++i) {
      double s = 0.0;
      for (std::size_t w = 0; w < cols; ++w) s += out[w] * a[i * cols + w];
      z[i] = s;
    }
    double cmax = 0.0, avg_log = 0.0;
    for (std::size_t w = 0; w < cols; ++w) {
      double s = 0.0;
      for (std::size_t i = 0; i < rows; ++i) s += r.p[i] * a[i * cols + w] / z[i];
      c[w] = s;
      cmax = std::max(cmax, s);
      if (out[w] > 0.0) avg_log += out[w] * std::log(s);
    }
    sol.gap = std::max(0.0, (std::log(cmax) - avg_log) / ln2);
    sol.iterations = it;
    for (std::size_t w = 0; w < cols; ++w) out[w] *= c[w];
    if (sol.gap < opt.rate_tolerance) break;
  }
  sol.channel.assign(rows * cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t w = 0; w < cols; ++w) s += out[w] * a[i * cols + w];
    for (std::size_t w = 0; w < cols; ++w) sol.channel[i * cols + w] = out[w] * a[i * cols + w] / s;
  }
  sol.distortion = reduced_distortion(r, sol.channel);
  sol.rate = reduced_rate(r, sol.channel);
  return sol;
}

Solution solve_slope(const Reduced& r, double slope, const RdOptions& opt) {
  std::vector<double> a(r.dist.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = std::exp(-slope * r.dist[k]);
  return blahut_arimoto(r, a, opt);
}

Solution solve_zero_distortion(const Reduced& r, const RdOptions& opt) {
  std::vector<double> a(r.dist.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = r.dist[k] == 0.0 ? 1.0 : 0.0;
  return blahut_arimoto(r, a, opt);
}

RdPoint expand(const Distribution& q, const DistortionMatrix& d, const Reduced& r, const Solution& s, double target) {
  RdPoint pt;
  pt.distortion = target;
  pt.rate = s.rate;
  pt.tolerance = s.gap;
  pt.iterations = s.iterations;
  pt.channel.assign(q.size(), std::vector<double>(r.cols, 0.0));
  for (std::size_t x = 0; x < q.size(); ++x) pt.channel[x][static_cast<std::size_t>(d.zero_repro(static_cast<Symbol>(x)))] = 1.0;
  for (std::size_t i = 0; i < r.rows.size(); ++i)
    for (std::size_t w = 0; w < r.cols; ++w) pt.channel[r.rows[i]][w] = s.channel[i * r.cols + w];
  pt.achieved_distortion = reduced_distortion(r, s.channel);
  return pt;
}

}  // namespace

double zero_rate_distortion(const Distribution& q, const DistortionMatrix& d) {
  if (q.size() != d.source_size()) throw std::invalid_argument("source distribution and distortion matrix disagree");
  double best = kInfinity;
  for (std::size_t w = 0; w < d.repro_size(); ++w) {
    double s = 0.0;
    for (std::size_t x = 0; x < q.size(); ++x) s += q[x] * d(static_cast<Symbol>(x), static_cast<Symbol>(w));
    best = std::min(best, s);
  }
  return best;
}

RdPoint rate_distortion(const Distribution& q, const DistortionMatrix& d, double target, const RdOptions& opt) {
  if (!(target >= 0.0)) throw std::invalid_argument("target distortion must be >= 0");
  Reduced r = reduce(q, d);
  const double dmax = zero_rate_distortion(q, d);

  if (target >= dmax) {
    // One column serves every x.
    std::size_t best_w = 0;
    double best = kInfinity;
    for (std::size_t w = 0; w < r.cols; ++w) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.p.size(); ++i) s += r.p[i] * r.dist[i * r.cols + w];
      if (s < best) {
        best = s;
        best_w = w;
      }
    }
    Solution s;
    s.channel.assign(r.p.size() * r.cols, 0.0);
    for (std::size_t i = 0; i < r.p.size(); ++i) s.channel[i * r.cols + best_w] = 1.0;
    s.distortion = best;
    return expand(q, d, r, s, target);
  }

  if (target == 0.0) return expand(q, d, r, solve_zero_distortion(r, opt), target);

  // D(slope) is nonincreasing; find a bracket [lo, hi] with D(lo) > target >= D(hi).
  double lo = 0.0;
  Solution s_lo = solve_slope(r, lo, opt);
  double hi = 1.0;
  Solution s_hi = solve_slope(r, hi, opt);
  while (s_hi.distortion > target && hi < 1e6) {
    lo = hi;
    s_lo = std::move(s_hi);
    hi *= 2.0;
    s_hi = solve_slope(r, hi, opt);
  }
  if (s_hi.distortion > target) return expand(q, d, r, solve_zero_distortion(r, opt), target);

  for (int step = 0; step < 200; ++step) {
    // The chord between the bracket ends is within O(width^2) of the curve.
    if (s_lo.distortion - s_hi.distortion < 1e-8 || target - s_hi.distortion < 1e-13 || hi - lo < 1e-13 * hi) break;
    double mid = 0.5 * (lo + hi);
    Solution s_mid = solve_slope(r, mid, opt);
    if (s_mid.distortion > target) {
      lo = mid;
      s_lo = std::move(s_mid);
    } else {
      hi = mid;
      s_hi = std::move(s_mid);
    }
  }

  // Time-share the bracket endpoints so the constraint is met with equality; mutual
  // information is convex in the channel, so the mixture is no worse than the chord.
  Solution best = s_hi;
  if (s_lo.distortion > target && s_hi.distortion < target) {
    double lambda = (target - s_hi.distortion) / (s_lo.distortion - s_hi.distortion);
    Solution mix = s_hi;
    for (std::size_t k = 0; k < mix.channel.size(); ++k)
      mix.channel[k] = lambda * s_lo.channel[k] + (1.0 - lambda) * s_hi.channel[k];
    mix.distortion = reduced_distortion(r, mix.channel);
    mix.rate = reduced_rate(r, mix.channel);
    if (mix.distortion <= target + 1e-12 && mix.rate < best.rate) best = std::move(mix);
  }
  return expand(q, d, r, best, target);
}

double inverse_rate_distortion(const Distribution& q, const DistortionMatrix& d, double target_rate,
                               const RdOptions& opt) {
  const double dmax = zero_rate_distortion(q, d);
  if (target_rate <= 0.0) return dmax;
  if (rate_distortion(q, d, 0.0, opt).rate <= target_rate) return 0.0;
  double lo = 0.0, hi = dmax;
  while (hi - lo > 1e-7 * 0.5) {
    double mid = 0.5 * (lo + hi);
    if (rate_distortion(q, d, mid, opt).rate <= target_rate)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<RdPoint> rd_curve(const Distribution& q, const DistortionMatrix& d, int num_points, const RdOptions& opt) {
  if (num_points < 2) throw std::invalid_argument("rd_curve needs at least 2 points");
  const double dmax = zero_rate_distortion(q, d);
  std::vector<RdPoint> out;
  out.reserve(static_cast<std::size_t>(num_points));
  for (int k = 0; k < num_points; ++k) {
    double dk = dmax * static_cast<double>(k) / static_cast<double>(num_points - 1);
    out.push_back(rate_distortion(q, d, dk, opt));
  }
  return out;
}

}  // namespace secrd
