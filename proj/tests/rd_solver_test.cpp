#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "secrd/rd_solver.hpp"

using namespace secrd;

namespace {

double closed_form_binary(double q, double d) {
  double m = std::min(q, 1.0 - q);
  if (d >= m) return 0.0;
  return std::max(0.0, binary_entropy(q) - binary_entropy(d));
}

// Bisection oracle for 1 - h_b(D) = r on D in [0, 1/2].
double invert_uniform_binary(double r) {
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (1.0 - binary_entropy(mid) > r) lo = mid; else hi = mid;
  }
  return hi;
}

}  // namespace

TEST(RateDistortion, UniformBinaryExamples) {
  auto h = DistortionMatrix::hamming(2);
  Distribution u({0.5, 0.5});
  EXPECT_NEAR(rate_distortion(u, h, 0.0).rate, 1.0, 1e-12);
  EXPECT_NEAR(rate_distortion(u, h, 0.11).rate, 1.0 - binary_entropy(0.11), 1e-7);
  EXPECT_NEAR(rate_distortion(u, h, 0.11).rate, 0.5001, 1e-4);
  EXPECT_EQ(rate_distortion(u, h, 0.5).rate, 0.0);
  EXPECT_EQ(rate_distortion(Distribution({0.2, 0.8}), h, 0.3).rate, 0.0);
}

TEST(RateDistortion, MatchesBinaryClosedForm) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  auto h = DistortionMatrix::hamming(2);
  for (int t = 0; t < 60; ++t) {
    double q = u(rng);
    double d = std::uniform_real_distribution<double>(0.0, 0.5)(rng);
    RdPoint pt = rate_distortion(Distribution({q, 1.0 - q}), h, d);
    EXPECT_NEAR(pt.rate, closed_form_binary(q, d), 1e-6) << "q=" << q << " D=" << d;
    EXPECT_LE(expected_distortion(pt.joint(Distribution({q, 1.0 - q})), h), d + 1e-9);
  }
}

TEST(RateDistortion, ChannelRespectsConstraintOnLargerAlphabets) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 30; ++t) {
    std::size_t k = 2 + rng() % 3, m = 2 + rng() % 3;
    std::vector<double> vals(k * m);
    for (auto& v : vals) v = std::uniform_real_distribution<double>(0.1, 2.0)(rng);
    for (std::size_t x = 0; x < k; ++x) vals[x * m + rng() % m] = 0.0;
    DistortionMatrix d(k, m, vals);
    std::vector<double> w(k);
    for (auto& v : w) v = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    Distribution q = Distribution::renormalized(w);
    double dmax = zero_rate_distortion(q, d);
    double target = std::uniform_real_distribution<double>(0.0, dmax)(rng);
    RdPoint pt = rate_distortion(q, d, target);
    EXPECT_GE(pt.rate, 0.0);
    EXPECT_LE(expected_distortion(pt.joint(q), d), target + 1e-9);
    EXPECT_NEAR(mutual_information(pt.joint(q)), pt.rate, 1e-9);
  }
}

TEST(RateDistortion, ZeroDistortionMergesSharedColumns) {
  // Symbols 0 and 1 share a zero column, so R(q, 0) = H of the merged source.
  DistortionMatrix d({{0.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}});
  Distribution q({0.25, 0.25, 0.5});
  EXPECT_NEAR(rate_distortion(q, d, 0.0).rate, 1.0, 1e-9);
}

TEST(RateDistortion, DropsZeroProbabilityRows) {
  auto h = DistortionMatrix::hamming(3);
  RdPoint pt = rate_distortion(Distribution({0.5, 0.0, 0.5}), h, 0.0);
  EXPECT_NEAR(pt.rate, 1.0, 1e-12);
  EXPECT_EQ(pt.channel[1][1], 1.0);
}

TEST(RateDistortion, LenientMeasureNeedsNoMoreRate) {
  std::mt19937_64 rng(5);
  DistortionMatrix dl({{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}});
  DistortionMatrix de({{0.0, 0.5, 1.0}, {0.5, 0.0, 1.0}, {0.5, 0.5, 0.0}});
  ASSERT_TRUE(is_more_lenient(de, dl));
  for (int t = 0; t < 20; ++t) {
    std::vector<double> w(3);
    for (auto& v : w) v = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    Distribution q = Distribution::renormalized(w);
    double d = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
    EXPECT_LE(rate_distortion(q, de, d).rate, rate_distortion(q, dl, d).rate + 1e-7);
  }
}

TEST(Inverse, Examples) {
  auto h = DistortionMatrix::hamming(2);
  Distribution u({0.5, 0.5});
  EXPECT_EQ(inverse_rate_distortion(u, h, 1.0), 0.0);
  EXPECT_NEAR(inverse_rate_distortion(u, h, 0.5), invert_uniform_binary(0.5), 2e-7);
  EXPECT_NEAR(inverse_rate_distortion(u, h, 0.5), 0.1100, 1e-4);
  EXPECT_EQ(inverse_rate_distortion(Distribution({0.3, 0.7}), h, 0.0), zero_rate_distortion(Distribution({0.3, 0.7}), h));
  EXPECT_EQ(inverse_rate_distortion(u, h, 3.0), 0.0);
}

TEST(Curve, ThreePointUniformBinary) {
  auto c = rd_curve(Distribution({0.5, 0.5}), DistortionMatrix::hamming(2), 3);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_DOUBLE_EQ(c[1].distortion, 0.25);
  EXPECT_NEAR(c[0].rate, 1.0, 1e-12);
  EXPECT_NEAR(c[1].rate, 1.0 - binary_entropy(0.25), 1e-7);
  EXPECT_EQ(c[2].rate, 0.0);
  EXPECT_THROW(rd_curve(Distribution({0.5, 0.5}), DistortionMatrix::hamming(2), 1), std::invalid_argument);
}

TEST(Curve, DeterministicSourceHasZeroRate) {
  for (const auto& pt : rd_curve(Distribution({1.0, 0.0}), DistortionMatrix::hamming(2), 4)) EXPECT_EQ(pt.rate, 0.0);
}

TEST(Curve, NonincreasingAndConvex) {
  DistortionMatrix d({{0.0, 1.0, 3.0}, {2.0, 0.0, 1.0}, {1.0, 1.0, 0.0}});
  Distribution q({0.2, 0.5, 0.3});
  auto c = rd_curve(q, d, 15);
  for (std::size_t i = 1; i < c.size(); ++i) EXPECT_LE(c[i].rate, c[i - 1].rate + 1e-6);
  for (std::size_t i = 1; i + 1 < c.size(); ++i) EXPECT_LE(c[i].rate, 0.5 * (c[i - 1].rate + c[i + 1].rate) + 1e-6);
}
