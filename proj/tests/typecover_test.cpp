#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "secrd/ball_search.hpp"
#include "secrd/combinatorics.hpp"
#include "secrd/cover.hpp"
#include "secrd/type_class.hpp"

using namespace secrd;

namespace {

TypeClass make_class(std::vector<int> counts) { return TypeClass(EmpiricalType(std::move(counts))); }

// Brute force over all of X^n, lexicographic.
std::vector<Word> brute_members(const std::vector<int>& counts) {
  int n = 0;
  for (int c : counts) n += c;
  const std::size_t a = counts.size();
  std::vector<Word> out;
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= a;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    Word w = index_word(idx, n, a);
    std::vector<int> c(a, 0);
    for (Symbol s : w) ++c[static_cast<std::size_t>(s)];
    if (c == counts) out.push_back(w);
  }
  return out;
}

Word parse(const std::string& s) {
  Word w;
  for (char c : s) w.push_back(c - '0');
  return w;
}

}  // namespace

TEST(TypeClassTest, EnumeratesSmallClasses) {
  auto t = make_class({1, 1});
  EXPECT_EQ(t.enumerate(), (std::vector<Word>{parse("01"), parse("10")}));
  EXPECT_EQ(make_class({2, 2}).enumerate().size(), 6u);
  EXPECT_EQ(make_class({1, 1, 1}).enumerate().size(), 6u);
}

TEST(TypeClassTest, EnumerationMatchesBruteForce) {
  for (auto counts : std::vector<std::vector<int>>{{2, 2}, {3, 1, 2}, {0, 4, 1}, {2, 2, 2}, {5, 0}, {1, 2, 1, 2}}) {
    auto t = make_class(counts);
    auto expect = brute_members(counts);
    EXPECT_EQ(t.enumerate(), expect);
    EXPECT_EQ(t.size(), expect.size());
  }
}

TEST(TypeClassTest, RankAndUnrankRoundTrip) {
  auto t = make_class({2, 2});
  EXPECT_EQ(t.rank(parse("0011")), 0u);
  EXPECT_EQ(t.unrank(t.size() - 1), parse("1100"));
  for (auto counts : std::vector<std::vector<int>>{{3, 3, 2}, {4, 1, 1, 2}, {6, 5}}) {
    auto u = make_class(counts);
    auto members = u.enumerate();
    for (std::uint64_t k = 0; k < u.size(); ++k) {
      EXPECT_EQ(u.unrank(k), members[k]);
      EXPECT_EQ(u.rank(members[k]), k);
    }
  }
}

TEST(TypeClassTest, RankRejectsNonMembers) {
  auto t = make_class({2, 2});
  EXPECT_FALSE(t.contains(parse("0001")));
  EXPECT_THROW(t.rank(parse("0001")), std::invalid_argument);
  EXPECT_THROW(t.unrank(6), std::out_of_range);
}

TEST(TypeClassTest, LargeClassRanksWithoutEnumeration) {
  auto t = make_class({15, 15, 10});
  std::mt19937_64 rng(7);
  Word x = t.first();
  for (int trial = 0; trial < 50; ++trial) {
    std::shuffle(x.begin(), x.end(), rng);
    EXPECT_EQ(t.unrank(t.rank(x)), x);
  }
}

TEST(TypeClassTest, CapRefusalNamesRequirement) {
  auto t = make_class({13, 12});
  EnumerationCap cap;
  try {
    t.enumerate(cap);
    FAIL() << "expected refusal";
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.needed_length(), 25);
    EXPECT_NE(std::string(e.what()).find("required cap"), std::string::npos);
  }
  EnumerationCap small{24, 100};
  EXPECT_THROW(make_class({10, 10}).enumerate(small), CapExceeded);
  EXPECT_NO_THROW(make_class({4, 4}).enumerate(small));
}

TEST(TypeClassTest, SizeWithinMethodOfTypesBounds) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t a = 2 + rng() % 3;
    int n = 1 + static_cast<int>(rng() % 30);
    std::vector<int> counts(a, 0);
    for (int i = 0; i < n; ++i) ++counts[rng() % a];
    auto t = make_class(counts);
    double h = entropy(t.type().as_distribution());
    double lg = t.log2_size();
    EXPECT_LE(lg, n * h + 1e-9);
    EXPECT_GE(lg, n * h - static_cast<double>(a) * std::log2(n + 1.0) - 1e-9);
    EXPECT_NEAR(lg, std::log2(static_cast<double>(multinomial(counts))), 1e-9);
  }
}

TEST(DCoverTest, SmallExamples) {
  auto t = make_class({1, 1});
  auto ham = DistortionMatrix::hamming(2);
  auto c = d_cover({parse("00")}, t, ham, 0.5);
  EXPECT_EQ(c.ranks, (std::vector<std::uint64_t>{0, 1}));
  EXPECT_EQ(d_cover({parse("00")}, t, ham, 1.0).size(), t.size());
  EXPECT_EQ(d_cover({parse("00")}, t, ham, 0.0).size(), 0u);
}

TEST(DCoverTest, RecordsLowestCodewordAndOverlap) {
  auto t = make_class({2, 2});
  auto ham = DistortionMatrix::hamming(2);
  std::vector<Word> book{parse("0011"), parse("0101")};
  auto c = d_cover(book, t, ham, 0.5);
  // Oracle: direct minimum over the codebook.
  std::uint64_t multi = 0;
  std::vector<std::uint64_t> ranks;
  for (const Word& x : t.enumerate()) {
    std::vector<int> hits;
    for (std::size_t i = 0; i < book.size(); ++i)
      if (total_distortion(x, book[i], ham) <= 2) hits.push_back(static_cast<int>(i));
    if (hits.empty()) continue;
    ranks.push_back(t.rank(x));
    if (hits.size() > 1) ++multi;
    EXPECT_EQ(c.codeword[ranks.size() - 1], static_cast<std::uint32_t>(hits.front()));
  }
  EXPECT_EQ(c.ranks, ranks);
  EXPECT_EQ(c.multiply_covered, multi);
}

TEST(DCoverTest, PermutingCodewordsPermutesTheCover) {
  std::mt19937_64 rng(3);
  auto t = make_class({3, 2, 3});
  auto ham = DistortionMatrix::hamming(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Word> book;
    for (int i = 0; i < 3; ++i) book.push_back(index_word(rng() % 6561, 8, 3));
    Permutation p = identity_permutation(8);
    std::shuffle(p.begin(), p.end(), rng);
    auto base = d_cover(book, t, ham, 0.25);
    std::vector<Word> moved;
    for (const Word& w : book) moved.push_back(apply_permutation(p, w));
    auto image = d_cover(moved, t, ham, 0.25);
    std::vector<std::uint64_t> permuted;
    for (std::uint64_t r : base.ranks) permuted.push_back(t.rank(apply_permutation(p, t.unrank(r))));
    std::sort(permuted.begin(), permuted.end());
    EXPECT_EQ(permuted, image.ranks);
  }
}

TEST(PermutationTest, ApplyAndValidate) {
  EXPECT_EQ(apply_permutation({2, 0, 1}, Word{5, 6, 7}), (Word{7, 5, 6}));
  EXPECT_TRUE(is_permutation({1, 0, 2}));
  EXPECT_FALSE(is_permutation({1, 1, 2}));
  EXPECT_FALSE(is_permutation({0, 3}));
  EXPECT_THROW(apply_permutation({0, 1}, Word{1, 2, 3}), std::invalid_argument);
}

namespace {

void expect_valid_cover(const PermutationCover& c) {
  const auto& t = c.type;
  ASSERT_EQ(c.first_cover.size(), t.size());
  EXPECT_EQ(c.permutations.front(), identity_permutation(t.length()));
  // Union of permuted base copies is the class; first_cover is the lowest covering index.
  std::vector<std::uint32_t> lowest(t.size(), ~0u);
  for (std::size_t k = c.permutations.size(); k-- > 0;) {
    EXPECT_TRUE(is_permutation(c.permutations[k]));
    for (std::uint64_t r : c.base) lowest[t.rank(apply_permutation(c.permutations[k], t.unrank(r)))] =
        static_cast<std::uint32_t>(k);
  }
  EXPECT_EQ(lowest, c.first_cover);
  // Exclusive sets partition the class.
  std::vector<int> seen(t.size(), 0);
  std::uint64_t total = 0;
  for (const auto& s : c.exclusive_sets()) {
    total += s.size();
    for (std::uint64_t r : s) ++seen[r];
  }
  EXPECT_EQ(total, t.size());
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
  // Identity's exclusive set is the base itself.
  EXPECT_EQ(c.exclusive_sets().front(), c.base);
}

}  // namespace

TEST(PermutationCoverTest, WholeClassNeedsOnlyIdentity) {
  auto t = make_class({2, 2});
  std::vector<std::uint64_t> all{0, 1, 2, 3, 4, 5};
  auto c = cover_with_permutations(all, t, 1);
  EXPECT_EQ(c.count(), 1u);
  expect_valid_cover(c);
}

TEST(PermutationCoverTest, PairBaseInSixElementClass) {
  auto t = make_class({2, 2});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto c = cover_with_permutations({0, 5}, t, seed);
    EXPECT_GE(c.count(), 3u);
    EXPECT_LE(static_cast<double>(c.count()), std::ceil(3 * std::log2(6.0)));
    expect_valid_cover(c);
  }
}

TEST(PermutationCoverTest, SingletonBase) {
  auto t = make_class({2, 1, 1});
  auto c = cover_with_permutations({4}, t, 9);
  EXPECT_EQ(c.count(), t.size());
  EXPECT_LE(static_cast<double>(c.count()), c.covering_bound());
  expect_valid_cover(c);
}

TEST(PermutationCoverTest, RejectsBadBase) {
  auto t = make_class({2, 2});
  EXPECT_THROW(cover_with_permutations({}, t, 0), std::invalid_argument);
  EXPECT_THROW(cover_with_permutations({6}, t, 0), std::invalid_argument);
}

TEST(PermutationCoverTest, DeterministicInSeed) {
  auto t = make_class({4, 3, 3});
  auto a = cover_with_permutations({0, 17, 300}, t, 42);
  auto b = cover_with_permutations({0, 17, 300}, t, 42);
  EXPECT_EQ(a.permutations, b.permutations);
  EXPECT_EQ(a.first_cover, b.first_cover);
}

TEST(PermutationCoverTest, GreedyUsuallyMeetsExistenceBound) {
  std::mt19937_64 rng(2024);
  int within = 0;
  const int runs = 50;
  for (int run = 0; run < runs; ++run) {
    std::size_t a = 2 + rng() % 2;
    int n = 4 + static_cast<int>(rng() % 7);
    std::vector<int> counts(a, 0);
    for (int i = 0; i < n; ++i) ++counts[rng() % a];
    auto t = make_class(counts);
    std::uint64_t size = t.size();
    std::uint64_t want = 1 + rng() % std::max<std::uint64_t>(1, size / 3);
    std::set<std::uint64_t> base;
    while (base.size() < want) base.insert(rng() % size);
    auto c = cover_with_permutations({base.begin(), base.end()}, t, rng());
    expect_valid_cover(c);
    if (size == 1 || static_cast<double>(c.count()) <= c.covering_bound() + 1e-9) {
      ++within;
    } else {
      std::printf("bound exceeded: |T|=%llu |base|=%zu count=%zu bound=%.2f\n",
                  static_cast<unsigned long long>(size), base.size(), c.count(), c.covering_bound());
    }
  }
  EXPECT_GE(within, runs * 95 / 100);
}

TEST(SmallSetMassTest, Examples) {
  auto t = make_class({4, 4});
  auto c = cover_with_permutations({0, 1, 2, 3, 4, 5, 6, 7}, t, 5);
  expect_valid_cover(c);
  EXPECT_EQ(small_set_mass(c, 0.0), 0.0);
  auto sizes = c.exclusive_sizes();
  double largest = static_cast<double>(*std::max_element(sizes.begin(), sizes.end()));
  EXPECT_DOUBLE_EQ(small_set_mass(c, largest), 1.0);
  for (double thr : {1.0, 2.0, 3.0, 5.0}) {
    EXPECT_LE(small_set_mass(c, thr), c.count() * thr / static_cast<double>(t.size()) + 1e-12);
  }
  EXPECT_THROW(small_set_mass(c, -1.0), std::invalid_argument);
}

TEST(BallSearchTest, WordIndexRoundTrip) {
  for (std::uint64_t i = 0; i < 81; ++i) EXPECT_EQ(word_index(index_word(i, 4, 3), 3), i);
  EXPECT_EQ(index_word(5, 3, 2), parse("101"));
  EXPECT_DOUBLE_EQ(index_bits(10, 4), 20.0);
}

TEST(BallSearchTest, BallMatchesBruteForce) {
  auto d = DistortionMatrix({{0, 1, 2}, {1, 0, 1}, {0.5, 3, 0}});
  Word x{0, 2, 1, 1, 0};
  for (double level : {0.0, 0.2, 0.5, 1.0}) {
    std::vector<Word> got;
    for_each_within(x, d, level, [&](const Word& z) { got.push_back(z); });
    std::vector<Word> want;
    for (std::uint64_t i = 0; i < 243; ++i) {
      Word z = index_word(i, 5, 3);
      if (total_distortion(x, z, d) <= 5 * level + 1e-9) want.push_back(z);
    }
    EXPECT_EQ(got, want);
  }
}

TEST(BallSearchTest, BestReproductionMatchesBruteForce) {
  std::mt19937_64 rng(17);
  auto ham = DistortionMatrix::hamming(2);
  ReproductionScorer scorer(6, ham, 1.0 / 6.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Word> xs;
    std::vector<std::uint64_t> ws;
    for (int i = 0; i < 5; ++i) {
      xs.push_back(index_word(rng() % 64, 6, 2));
      ws.push_back(1 + rng() % 4);
    }
    std::uint64_t best_w = 0, best_i = 0;
    for (std::uint64_t z = 0; z < 64; ++z) {
      std::uint64_t w = 0;
      Word zw = index_word(z, 6, 2);
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (total_distortion(xs[i], zw, ham) <= 1) w += ws[i];
      if (w > best_w) {
        best_w = w;
        best_i = z;
      }
    }
    auto got = scorer.best(xs, ws);
    EXPECT_EQ(got.weight, best_w);
    EXPECT_EQ(got.index, best_i);
    EXPECT_TRUE(got.exhaustive);
    auto again = best_reproduction(xs, ws, ham, 1.0 / 6.0);
    EXPECT_EQ(again.index, best_i);
  }
}

TEST(BallSearchTest, RefusesBeyondCap) {
  auto ham = DistortionMatrix::hamming(2);
  EXPECT_THROW(best_reproduction({Word(21, 0)}, {1}, ham, 0.1), CapExceeded);
  auto got = best_among({parse("0000"), parse("1111")}, {1, 2}, {parse("0001"), parse("1110")}, ham, 0.25);
  EXPECT_EQ(got.weight, 2u);
  EXPECT_EQ(got.z, parse("1110"));
  EXPECT_FALSE(got.exhaustive);
}
