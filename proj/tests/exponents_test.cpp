#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "secrd/exponents.hpp"

using namespace secrd;

namespace {

const DistortionMatrix kHamming2 = DistortionMatrix::hamming(2);

double rate_binary(double q, double d) {
  double m = std::min(q, 1.0 - q);
  return d >= m ? 0.0 : binary_entropy(q) - binary_entropy(d);
}

// Dense 1-D sweep of the binary objective with the closed-form rate.
double sweep_secrecy_binary(double p, double d) {
  double best = kInfinity;
  for (int k = 0; k <= 10000; ++k) {
    double q = k * 1e-4;
    best = std::min(best, binary_divergence(q, p) + rate_binary(q, d));
  }
  return best;
}

}  // namespace

TEST(PerfectSecrecy, UniformBinaryClosedForm) {
  Distribution u({0.5, 0.5});
  auto r = perfect_secrecy_exponent(u, kHamming2, 0.1);
  EXPECT_NEAR(r.value, 1.0 - binary_entropy(0.1), 2e-3);
  EXPECT_NEAR(r.value, 0.5310, 1e-3);
  EXPECT_NEAR(r.value, sweep_secrecy_binary(0.5, 0.1), 2e-3);
  EXPECT_GE(r.meta.evaluations, 65u);
  EXPECT_EQ(r.meta.grid_resolution, 64);
  EXPECT_EQ(r.meta.final_resolution, 4096);
}

TEST(PerfectSecrecy, SkewedBinaryMatchesSweep) {
  for (double p : {0.2, 0.35}) {
    for (double d : {0.05, 0.15, 0.3}) {
      auto r = perfect_secrecy_exponent(Distribution({p, 1 - p}), kHamming2, d);
      EXPECT_NEAR(r.value, sweep_secrecy_binary(p, d), 1e-3) << p << " " << d;
    }
  }
}

TEST(PerfectSecrecy, ZeroDistortionExactMatch) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> w(3);
    for (auto& v : w) v = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    Distribution p = Distribution::renormalized(w);
    double pmax = std::max({p[0], p[1], p[2]});
    auto r = perfect_secrecy_exponent(p, DistortionMatrix::hamming(3), 0.0);
    EXPECT_NEAR(r.value, -std::log2(pmax), 1e-9);
  }
}

TEST(PerfectSecrecy, ZeroBeyondZeroRateDistortion) {
  Distribution p({0.3, 0.7});
  EXPECT_EQ(perfect_secrecy_exponent(p, kHamming2, 0.3).value, 0.0);
  EXPECT_EQ(perfect_secrecy_exponent(p, kHamming2, 0.45).value, 0.0);
}

TEST(PerfectSecrecy, ReevaluatingAtArgminReproducesValue) {
  Distribution p({0.3, 0.7});
  auto r = perfect_secrecy_exponent(p, kHamming2, 0.1);
  double again = kl_divergence(r.argmin, p) + rate_distortion(r.argmin, kHamming2, 0.1).rate;
  EXPECT_NEAR(again, r.value, 1e-12);
}

TEST(PerfectSecrecy, NonincreasingInDistortion) {
  Distribution p({0.2, 0.3, 0.5});
  auto h3 = DistortionMatrix::hamming(3);
  double prev = kInfinity;
  for (double d : {0.0, 0.05, 0.1, 0.2, 0.3, 0.5}) {
    double v = perfect_secrecy_exponent(p, h3, d).value;
    EXPECT_LE(v, prev + 1e-9);
    prev = v;
  }
}

TEST(PerfectSecrecy, LowerEnvelopeOfBlindExponents) {
  Distribution p({0.25, 0.75});
  double e = perfect_secrecy_exponent(p, kHamming2, 0.1).value;
  for (int k = 0; k <= 64; ++k) {
    Distribution q({k / 64.0, 1.0 - k / 64.0});
    EXPECT_LE(e, blind_guess_exponent(q, p, kHamming2, 0.1) + 1e-9);
  }
}

TEST(Marton, EmptyConstraintSetIsInfinite) {
  auto r = marton_exponent(Distribution({0.5, 0.5}), kHamming2, 0.0, 1.0);
  EXPECT_TRUE(std::isinf(r.value));
  EXPECT_TRUE(std::isinf(marton_exponent(Distribution({0.5, 0.5}), kHamming2, 0.0, 1.5).value));
}

TEST(Marton, ZeroWhenSourceAlreadyTooComplex) {
  // R_L(p) = 1 - h_b(0.11) ~ 0.5 exceeds the coding rate, so Q = p is feasible.
  EXPECT_EQ(marton_exponent(Distribution({0.5, 0.5}), kHamming2, 0.11, 0.25).value, 0.0);
}

TEST(Marton, BinaryBoundaryOracle) {
  // R_L(p) < r_c: the infimum sits on h_b(q*) - h_b(0.11) = 0.25 with q* between 0.2 and 0.5.
  const double p = 0.2, dc = 0.11, rc = 0.25;
  double lo = p, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) - binary_entropy(dc) > rc) hi = mid; else lo = mid;
  }
  double oracle = binary_divergence(hi, p);
  auto r = marton_exponent(Distribution({p, 1 - p}), kHamming2, dc, rc);
  EXPECT_NEAR(r.value, oracle, 1e-5);
  EXPECT_TRUE(r.meta.near_boundary);
}

TEST(Marton, SourceOnBoundaryGivesZero) {
  // Pick r_c equal to R_L(p, d_c) so that p sits on the constraint boundary.
  Distribution p({0.3, 0.7});
  double rc = rate_distortion(p, kHamming2, 0.1).rate;
  EXPECT_NEAR(marton_exponent(p, kHamming2, 0.1, rc).value, 0.0, 1e-9);
}

TEST(Marton, PositiveExactlyWhenSourceRateBelowCodingRate) {
  Distribution p({0.1, 0.9});
  double rl = rate_distortion(p, kHamming2, 0.05).rate;
  EXPECT_EQ(marton_exponent(p, kHamming2, 0.05, rl * 0.5).value, 0.0);
  EXPECT_GT(marton_exponent(p, kHamming2, 0.05, rl + 0.1).value, 0.0);
}

TEST(Theorem, Examples) {
  Distribution u({0.5, 0.5});
  EXPECT_EQ(theorem_exponent(0.25, u, kHamming2, 0.1), 0.25);
  EXPECT_NEAR(theorem_exponent(2.0, u, kHamming2, 0.1), 0.5310, 1e-3);
  EXPECT_EQ(theorem_exponent(0.0, u, kHamming2, 0.1), 0.0);
}

TEST(Theorem, MonotoneAndSaturating) {
  Distribution p({0.3, 0.7});
  double e = perfect_secrecy_exponent(p, kHamming2, 0.1).value;
  double prev = 0.0;
  for (double r : {0.0, 0.1, 0.2, 0.4, 0.8, 1.6}) {
    double v = theorem_exponent(r, p, kHamming2, 0.1);
    EXPECT_GE(v, prev);
    EXPECT_LE(v, e + 1e-12);
    prev = v;
  }
  EXPECT_NEAR(prev, e, 1e-12);
}

TEST(BlindExponent, Examples) {
  Distribution p({0.5, 0.5});
  EXPECT_NEAR(blind_guess_exponent(p, p, kHamming2, 0.1), 1.0 - binary_entropy(0.1), 1e-7);
  Distribution q({0.3, 0.7});
  EXPECT_NEAR(blind_guess_exponent(q, p, kHamming2, 0.45), kl_divergence(q, p), 1e-12);
  EXPECT_NEAR(blind_guess_exponent(q, p, kHamming2, 0.1),
              binary_divergence(0.3, 0.5) + binary_entropy(0.3) - binary_entropy(0.1), 1e-7);
}

TEST(PackingExponent, Examples) {
  Distribution u({0.5, 0.5});
  EXPECT_NEAR(packing_exponent_e0(u, 0.25, kHamming2, 0.11), 1.25 - (1.0 - binary_entropy(0.11)), 1e-7);
  EXPECT_NEAR(packing_exponent_e0(u, 0.25, kHamming2, 0.11), 0.7499, 1e-4);
  double rl = rate_distortion(u, kHamming2, 0.2).rate;
  EXPECT_NEAR(packing_exponent_e0(u, rl, kHamming2, 0.2), 1.0, 1e-12);
  EXPECT_NEAR(packing_exponent_e0(Distribution({0.3, 0.7}), 0.4, kHamming2, 0.0), 0.4, 1e-9);
  EXPECT_NEAR(packing_exponent_e0(u, 0.9, kHamming2, 0.2), 1.0, 1e-12);
}
