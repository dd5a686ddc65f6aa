#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "secrd/adversary.hpp"
#include "secrd/ball_search.hpp"
#include "secrd/combinatorics.hpp"
#include "secrd/rd_solver.hpp"

using namespace secrd;

namespace {

const DistortionMatrix kHam = DistortionMatrix::hamming(2);

SingleTypeCode make_code(int n, double key_rate, double d_c, std::uint64_t seed) {
  CodebookRequest r;
  r.source_type = EmpiricalType({n / 2, n - n / 2});
  r.key_rate = key_rate;
  r.d_l = kHam;
  r.d_c = d_c;
  r.d_e = kHam;
  r.probe_distortions = {d_c};
  r.seed = seed;
  return build_single_type_code(select_packing_codebook_or_best(r), kHam, d_c, seed + 1);
}

}  // namespace

TEST(LeniencyMapTest, WitnessTables) {
  EXPECT_EQ(LeniencyMap(kHam, kHam).table(), (std::vector<Symbol>{0, 1}));
  EXPECT_EQ(LeniencyMap(DistortionMatrix::zero(2, 3), kHam).table(), (std::vector<Symbol>{0, 0}));
  EXPECT_THROW(LeniencyMap(kHam, DistortionMatrix::zero(2, 2)), std::invalid_argument);
  EXPECT_EQ(LeniencyMap::identity(3).apply(Word{2, 0, 1}), (Word{2, 0, 1}));
}

TEST(OptimalAdversaryTest, WholeClassInOneBall) {
  auto code = make_code(8, 0.25, 0.125, 1);
  SingleTypeSystem sys(code);
  OptimalAdversary opt(sys, kHam, 1.0, LeniencyMap(kHam, kHam));
  EXPECT_DOUBLE_EQ(opt.success(), 1.0);
  EXPECT_TRUE(opt.exhaustive());
}

TEST(OptimalAdversaryTest, XorOneBitIsHalfBelowHalfDistortion) {
  for (int n : {4, 8}) {
    XorOneBitCode sys(n);
    for (double d : {0.0, 0.25, 0.49}) {
      OptimalAdversary opt(sys, kHam, d, LeniencyMap(kHam, kHam));
      EXPECT_DOUBLE_EQ(opt.success(), 0.5) << n << " " << d;
    }
    // From D = 1/2 on, a vector halfway between the two candidates captures both.
    EXPECT_DOUBLE_EQ(OptimalAdversary(sys, kHam, 0.5, LeniencyMap(kHam, kHam)).success(), 1.0);
  }
}

TEST(OptimalAdversaryTest, ExactMatchSuccessIsInverseSupport) {
  auto code = make_code(6, 0.25, 0.0, 3);
  SingleTypeSystem sys(code);
  OptimalAdversary opt(sys, kHam, 0.0, LeniencyMap(kHam, kHam));
  // Oracle: posterior multiplicities by direct enumeration.
  std::map<Cryptogram, std::map<std::uint64_t, int>> post;
  for (std::uint64_t i = 0; i < sys.source_count(); ++i)
    for (std::uint64_t u = 0; u < 4; ++u) ++post[sys.encode(sys.source_block(i), u)][i];
  EXPECT_EQ(opt.cryptogram_count(), post.size());
  double hits = 0;
  for (const auto& [y, m] : post) {
    int mx = 0, tot = 0;
    for (const auto& [i, c] : m) {
      mx = std::max(mx, c);
      tot += c;
    }
    EXPECT_DOUBLE_EQ(opt.estimate(y).probability, static_cast<double>(mx) / tot);
    hits += mx;
  }
  EXPECT_DOUBLE_EQ(opt.success(), hits / (sys.source_count() * 4.0));
  EXPECT_THROW(opt.estimate(Cryptogram{{999, 0}, {1, 1}}), std::out_of_range);
}

TEST(OptimalAdversaryTest, RefusesBeyondPairCap) {
  XorOneBitCode sys(12);
  AttackLimits limits;
  limits.max_pairs = 100;
  EXPECT_THROW(OptimalAdversary(sys, kHam, 0.0, LeniencyMap(kHam, kHam), limits), CapExceeded);
}

TEST(OptimalAdversaryTest, CandidateSearchAboveExhaustiveCap) {
  auto code = make_code(8, 0.25, 0.125, 5);
  SingleTypeSystem sys(code);
  AttackLimits limits;
  limits.exhaustive_bits = 4;
  OptimalAdversary approx(sys, kHam, 0.125, LeniencyMap(kHam, kHam), limits);
  OptimalAdversary exact(sys, kHam, 0.125, LeniencyMap(kHam, kHam));
  EXPECT_FALSE(approx.exhaustive());
  EXPECT_LE(approx.success(), exact.success() + 1e-15);
  EXPECT_GE(approx.success(), KeyAttack(sys, LeniencyMap(kHam, kHam)).exact_success(kHam, 0.125) - 1e-15);
}

TEST(KeyAttackTest, ZeroWidthKeyAlwaysSucceeds) {
  auto code = make_code(8, 0.0, 0.125, 2);
  SingleTypeSystem sys(code);
  KeyAttack atk(sys, LeniencyMap(kHam, kHam));
  EXPECT_DOUBLE_EQ(atk.exact_success(kHam, 0.125), 1.0);
}

TEST(KeyAttackTest, OneKeyBitAtLeastHalf) {
  auto code = make_code(4, 0.25, 0.0, 2);
  SingleTypeSystem sys(code);
  ASSERT_EQ(sys.key_width(), 1);
  KeyAttack atk(sys, LeniencyMap(kHam, kHam));
  EXPECT_GE(atk.exact_success_full(kHam, 0.0), 0.5);
}

TEST(KeyAttackTest, XorReductionMatchesFullEnumeration) {
  for (double d_c : {0.0, 0.125, 0.25}) {
    auto code = make_code(8, 0.25, d_c, 8);
    SingleTypeSystem sys(code);
    KeyAttack atk(sys, LeniencyMap(kHam, kHam));
    for (double d : {d_c, 0.25, 0.375}) EXPECT_DOUBLE_EQ(atk.exact_success(kHam, d), atk.exact_success_full(kHam, d));
  }
  XorOneBitCode x(6);
  KeyAttack xa(x, LeniencyMap(kHam, kHam));
  EXPECT_DOUBLE_EQ(xa.exact_success(kHam, 0.3), xa.exact_success_full(kHam, 0.3));
}

TEST(KeyAttackTest, EqualityOnDisjointZeroExcessCodes) {
  for (int n : {6, 8, 10}) {
    auto code = make_code(n, 0.25, 0.0, 40 + n);
    ASSERT_TRUE(code.codebook().disjoint());
    SingleTypeSystem sys(code);
    KeyAttack atk(sys, LeniencyMap(kHam, kHam));
    EXPECT_EQ(atk.exact_success(kHam, 0.0), std::exp2(-code.key_width()));
  }
}

TEST(KeyAttackTest, IdentityWitnessReturnsDecodedWord) {
  auto code = make_code(8, 0.25, 0.125, 9);
  SingleTypeSystem sys(code);
  KeyAttack atk(sys, LeniencyMap(kHam, kHam));
  Cryptogram y = sys.encode(sys.source_block(10), 2);
  EXPECT_EQ(atk.estimate(y, 3), sys.decode(y, 3));
}

TEST(BlindEstimateTest, MatchesBruteForceOverAllZ) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t xa = 2 + rng() % 2, za = 2 + rng() % 2;
    int n = 3 + static_cast<int>(rng() % 6);
    std::vector<std::vector<double>> rows(xa, std::vector<double>(za));
    for (auto& r : rows) {
      for (auto& v : r) v = static_cast<double>(rng() % 4) / 2.0;
      r[rng() % za] = 0.0;
    }
    DistortionMatrix d(rows);
    std::vector<int> counts(xa, 0);
    for (int i = 0; i < n; ++i) ++counts[rng() % xa];
    EmpiricalType q(counts);
    TypeClass t(q);
    auto xs = t.enumerate();
    double level = static_cast<double>(rng() % 5) / 8.0;
    std::uint64_t best = 0, zcount = 1;
    for (int i = 0; i < n; ++i) zcount *= za;
    Word best_z;
    for (std::uint64_t zi = 0; zi < zcount; ++zi) {
      Word z = index_word(zi, n, za);
      std::uint64_t k = 0;
      for (const Word& x : xs) k += within_distortion(total_distortion(x, z, d), n, level);
      EXPECT_EQ(k, count_within(q, empirical_type(z, za).counts, d, level));
      if (best_z.empty() || k > best) {
        best = k;
        best_z = z;
      }
    }
    auto est = blind_estimate(q, d, level);
    EXPECT_EQ(est.probability, static_cast<double>(best) / static_cast<double>(xs.size()));
    EXPECT_EQ(est.z, best_z);
  }
}

TEST(BlindEstimateTest, ClosedFormExamples) {
  EmpiricalType balanced({4, 4});
  EXPECT_DOUBLE_EQ(blind_estimate(balanced, kHam, 0.25).probability, 17.0 / 70.0);
  EXPECT_DOUBLE_EQ(blind_estimate(balanced, kHam, 0.125).probability, 5.0 / 70.0);
  EXPECT_DOUBLE_EQ(blind_estimate(balanced, kHam, 0.0).probability, 1.0 / 70.0);
  EmpiricalType skewed({2, 5});
  double dmax = zero_rate_distortion(skewed.as_distribution(), kHam);
  EXPECT_DOUBLE_EQ(blind_estimate(skewed, kHam, dmax).probability, 1.0);
}

TEST(TypeAwarenessTest, RandomTypeGuessDecomposition) {
  for (int n : {4, 6, 8}) {
    for (double p1 : {0.5, 0.2}) {
      Distribution p({1 - p1, p1});
      double aware = type_aware_blind_success(n, p, kHam, 0.125);
      auto guess = random_type_guess_success(n, p, kHam, 0.125);
      EXPECT_EQ(guess.type_count, static_cast<std::size_t>(n + 1));
      EXPECT_LE(static_cast<double>(guess.type_count), std::pow(n + 1, 2));
      EXPECT_NEAR(guess.correct_guess_term, aware / guess.type_count, 1e-15);
      EXPECT_GE(guess.total, guess.correct_guess_term);
      // Oracle: enumerate every x, use the blind estimate of its own type.
      double brute = 0.0;
      for (std::uint64_t i = 0; i < (1ULL << n); ++i) {
        Word x = index_word(i, n, 2);
        auto q = empirical_type(x, 2);
        double px = std::pow(p1, q.counts[1]) * std::pow(1 - p1, q.counts[0]);
        brute += px * within_distortion(total_distortion(x, blind_estimate(q, kHam, 0.125).z, kHam), n, 0.125);
      }
      EXPECT_NEAR(aware, brute, 1e-12);
    }
  }
}

TEST(DominanceTest, OptimumDominatesSimpleStrategies) {
  for (int n : {6, 8, 10}) {
    for (double d_c : {0.0, 0.125, 0.25}) {
      auto code = make_code(n, 0.25, d_c, 60 + n);
      SingleTypeSystem sys(code);
      for (double d : {d_c, d_c + 0.125}) {
        OptimalAdversary opt(sys, kHam, d, LeniencyMap(kHam, kHam));
        double key = KeyAttack(sys, LeniencyMap(kHam, kHam)).exact_success(kHam, d);
        double blind = blind_estimate(*sys.source_type(), kHam, d).probability;
        EXPECT_GE(opt.success(), key - 1e-15);
        EXPECT_GE(opt.success(), blind - 1e-15);
        if (d >= d_c) EXPECT_GE(key, std::exp2(-code.key_width()) - 1e-15);
      }
    }
  }
}
