#include "secrd/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "secrd/combinatorics.hpp"
#include "secrd/parallel.hpp"

namespace secrd {

namespace {

using Objective = std::function<double(const Distribution&)>;

struct Lattice {
  std::vector<std::size_t> support;  // coordinates of p with positive mass
  std::size_t alphabet = 0;

  Distribution embed(const std::vector<int>& c, int total) const {
    std::vector<double> q(alphabet, 0.0);
    for (std::size_t i = 0; i < support.size(); ++i) q[support[i]] = static_cast<double>(c[i]) / total;
    return Distribution::renormalized(std::move(q));
  }
};

Lattice support_lattice(const Distribution& p) {
  Lattice l;
  l.alphabet = p.size();
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) l.support.push_back(i);
  return l;
}

struct Incumbent {
  std::vector<int> point;
  int total = 0;
  double value = kInfinity;
};

// Evaluates every candidate and keeps the first strict minimum.
void evaluate_all(const Lattice& lat, const std::vector<std::vector<int>>& cands, int total, const Objective& f,
                  unsigned threads, Incumbent& best, std::size_t& evaluations) {
  std::vector<double> vals(cands.size());
  parallel_for(cands.size(), threads, [&](std::size_t i) { vals[i] = f(lat.embed(cands[i], total)); });
  evaluations += cands.size();
  for (std::size_t i = 0; i < cands.size(); ++i)
    if (vals[i] < best.value) {
      best.value = vals[i];
      best.point = cands[i];
      best.total = total;
    }
}

std::vector<std::vector<int>> local_box(const std::vector<int>& center, int total, int radius) {
  const std::size_t m = center.size();
  std::vector<std::vector<int>> out;
  if (m == 1) return {center};
  double box = std::pow(2.0 * radius + 1.0, static_cast<double>(m - 1));
  if (box <= 20000.0) {
    std::vector<int> cur(m);
    auto rec = [&](auto&& self, std::size_t pos, int used) -> void {
      if (pos == m - 1) {
        int last = total - used;
        if (last < 0) return;
        cur[pos] = last;
        out.push_back(cur);
        return;
      }
      for (int dlt = -radius; dlt <= radius; ++dlt) {
        int v = center[pos] + dlt;
        if (v < 0 || used + v > total) continue;
        cur[pos] = v;
        self(self, pos + 1, used + v);
      }
    };
    rec(rec, 0, 0);
    return out;
  }
  // Large alphabets: pairwise mass transfers instead of the full box.
  out.push_back(center);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      for (int k = 1; k <= radius; ++k) {
        if (center[i] < k) break;
        auto c = center;
        c[i] -= k;
        c[j] += k;
        out.push_back(std::move(c));
      }
    }
  return out;
}

ExponentResult minimize(const Distribution& p, const Objective& f, const SimplexSearch& s) {
  Lattice lat = support_lattice(p);
  const int m = static_cast<int>(lat.support.size());
  int res = std::max(1, s.resolution);
  while (res > 1 && static_cast<double>(binomial(static_cast<std::uint64_t>(res + m - 1), static_cast<std::uint64_t>(m - 1))) >
                        static_cast<double>(s.max_grid_points))
    --res;

  ExponentResult out;
  out.meta.grid_resolution = res;
  Incumbent best;
  evaluate_all(lat, compositions(res, m), res, f, s.threads, best, out.meta.evaluations);

  int total = res;
  for (int round = 0; round < s.refinement_rounds && best.value < kInfinity; ++round) {
    total *= s.refinement_factor;
    std::vector<int> center = best.point;
    for (int& v : center) v *= total / best.total;
    evaluate_all(lat, local_box(center, total, s.refinement_factor), total, f, s.threads, best, out.meta.evaluations);
    out.meta.refinement_rounds = round + 1;
  }
  out.meta.final_resolution = total;

  // p itself is rarely on the lattice but is often the minimizer.
  double at_p = f(p);
  ++out.meta.evaluations;
  if (at_p <= best.value) {
    out.value = at_p;
    out.argmin = p;
  } else if (best.value < kInfinity) {
    out.value = best.value;
    out.argmin = lat.embed(best.point, best.total);
  } else {
    out.value = kInfinity;
    out.argmin = p;
  }
  return out;
}

}  // namespace

ExponentResult perfect_secrecy_exponent(const Distribution& p, const DistortionMatrix& d_e, double distortion,
                                        const SimplexSearch& search) {
  if (!(distortion >= 0.0)) throw std::invalid_argument("distortion level must be >= 0");
  if (p.size() != d_e.source_size()) throw std::invalid_argument("source and distortion alphabets differ");
  Objective f = [&](const Distribution& q) {
    double div = kl_divergence(q, p);
    if (std::isinf(div)) return kInfinity;
    return div + rate_distortion(q, d_e, distortion, search.rd).rate;
  };
  ExponentResult r = minimize(p, f, search);
  r.value = std::max(r.value, 0.0);
  return r;
}

ExponentResult marton_exponent(const Distribution& p, const DistortionMatrix& d_l, double d_c, double r_c,
                               const SimplexSearch& search) {
  if (!(d_c >= 0.0) || !(r_c >= 0.0)) throw std::invalid_argument("marton exponent needs d_c >= 0 and r_c >= 0");
  if (p.size() != d_l.source_size()) throw std::invalid_argument("source and distortion alphabets differ");
  constexpr double kSlack = 1e-9;
  auto rate = [&](const Distribution& q) { return rate_distortion(q, d_l, d_c, search.rd).rate; };

  Objective f = [&](const Distribution& q) {
    if (rate(q) <= r_c + kSlack) return kInfinity;
    return kl_divergence(q, p);
  };
  ExponentResult out;
  double rate_p = rate(p);
  if (rate_p > r_c + kSlack) {
    out.value = 0.0;
    out.argmin = p;
    out.meta.evaluations = 1;
    out.meta.near_boundary = rate_p - r_c < 1e-3;
    return out;
  }
  out = minimize(p, f, search);
  if (std::isinf(out.value)) return out;
  if (rate_p >= r_c - kSlack) {
    // p on the boundary of a nonempty set: it is in the closure if feasible points crowd it.
    for (std::size_t v = 0; v < p.size(); ++v) {
      std::vector<double> q(p.probs());
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = (1.0 - 1e-6) * q[i] + (i == v ? 1e-6 : 0.0);
      if (rate(Distribution::renormalized(q)) > r_c + kSlack) {
        out.value = 0.0;
        out.argmin = p;
        out.meta.near_boundary = true;
        return out;
      }
    }
  }

  // Slide from the feasible incumbent toward p; divergence shrinks along the segment.
  Distribution feasible = out.argmin;
  auto along = [&](double t) {
    std::vector<double> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + t * (feasible[i] - p[i]);
    return Distribution::renormalized(std::move(q));
  };
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    if (rate(along(mid)) > r_c + kSlack) hi = mid; else lo = mid;
  }
  Distribution edge = along(hi);
  out.meta.evaluations += 60;
  double div = kl_divergence(edge, p);
  if (rate(edge) > r_c + kSlack && div < out.value) {
    out.value = div;
    out.argmin = edge;
  }
  out.meta.near_boundary = std::abs(rate(out.argmin) - r_c) < 1e-3;
  return out;
}

double theorem_exponent(double r_key, const Distribution& p, const DistortionMatrix& d_e, double distortion,
                        const SimplexSearch& search) {
  if (!(r_key >= 0.0)) throw std::invalid_argument("key rate must be >= 0");
  if (r_key == 0.0) return 0.0;
  return std::min(r_key, perfect_secrecy_exponent(p, d_e, distortion, search).value);
}

double blind_guess_exponent(const Distribution& q, const Distribution& p, const DistortionMatrix& d_e,
                            double distortion) {
  double div = kl_divergence(q, p);
  if (std::isinf(div)) return kInfinity;
  return div + rate_distortion(q, d_e, distortion).rate;
}

double packing_exponent_e0(const Distribution& q, double r_key, const DistortionMatrix& d_l, double d_c) {
  double h = entropy(q);
  double rl = rate_distortion(q, d_l, d_c).rate;
  return std::min(h + r_key - rl, h);
}

}  // namespace secrd
