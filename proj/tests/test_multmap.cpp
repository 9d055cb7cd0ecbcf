#include <gtest/gtest.h>

#include <random>

#include "markov_torus/multmap.hpp"

using namespace markov_torus;

namespace {

Rational frac(long a, long b) { return Rational(BigInt(a), BigInt(b)); }

std::vector<std::int64_t> digits_of(const MultEncodeResult& r) { return std::get<std::vector<std::int64_t>>(r); }

// Words of length `len` whose closed decode interval holds x, with 1 identified to 0.
std::size_t covering_words(const MultContext& ctx, const Rational& x, std::size_t len) {
  const std::int64_t n = ctx.base();
  std::vector<std::int64_t> word(len, 0);
  std::size_t count = 0;
  while (true) {
    const auto d = mult_decode(ctx, word);
    const Rational hi = d.value + d.width;
    if (d.contains(x) || (x.is_zero() && hi == Rational(1))) ++count;
    std::size_t pos = len;
    while (pos > 0 && ++word[pos - 1] == n) word[--pos] = 0;
    if (pos == 0) break;
  }
  return count;
}

}  // namespace

TEST(MultApply, Examples) {
  EXPECT_EQ(mult_apply(MultContext(2), frac(1, 3)), frac(2, 3));
  EXPECT_EQ(mult_apply(MultContext(2), Rational(0)), Rational(0));
  EXPECT_EQ(mult_apply(MultContext(3), frac(1, 2)), frac(1, 2));
  EXPECT_THROW(mult_apply(MultContext(2), Rational(1)), std::domain_error);
  EXPECT_THROW(mult_apply(MultContext(2), frac(-1, 2)), std::domain_error);
  EXPECT_THROW(MultContext(1), std::invalid_argument);
}

TEST(MultEncode, HalfHasTwoExpansions) {
  const auto res = mult_encode(MultContext(2), frac(1, 2), 5);
  ASSERT_TRUE(std::holds_alternative<MultAmbiguity>(res));
  const auto& amb = std::get<MultAmbiguity>(res);
  EXPECT_EQ(amb.position, 1u);
  EXPECT_EQ(amb.upper, (std::vector<std::int64_t>{1, 0, 0, 0, 0}));
  EXPECT_EQ(amb.lower, (std::vector<std::int64_t>{0, 1, 1, 1, 1}));
}

TEST(MultEncode, ThirdAlternates) {
  EXPECT_EQ(digits_of(mult_encode(MultContext(2), frac(1, 3), 6)), (std::vector<std::int64_t>{0, 1, 0, 1, 0, 1}));
}

TEST(MultEncode, ZeroIsAllZeros) {
  for (std::int64_t n : {2, 3, 10})
    EXPECT_EQ(digits_of(mult_encode(MultContext(n), Rational(0), 8)), std::vector<std::int64_t>(8, 0));
}

TEST(MultDecode, Examples) {
  const auto d = mult_decode(MultContext(2), {1, 0, 0});
  EXPECT_EQ(d.value, frac(1, 2));
  EXPECT_EQ(d.width, frac(1, 8));
  EXPECT_EQ(mult_decode(MultContext(2), std::vector<std::int64_t>(10, 0)).value, Rational(0));
  const auto third = mult_decode(MultContext(2), digits_of(mult_encode(MultContext(2), frac(1, 3), 10)));
  EXPECT_LE((third.value - frac(1, 3)).abs(), frac(1, 1024));
  EXPECT_THROW(mult_decode(MultContext(3), {0, 3}), std::domain_error);
}

class MultProperties : public ::testing::TestWithParam<std::int64_t> {};

TEST_P(MultProperties, SemiconjugacyOnTruncatedWords) {
  const MultContext ctx(GetParam());
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  std::uniform_int_distribution<std::int64_t> digit(0, ctx.base() - 1);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::int64_t> w(24);
    for (auto& s : w) s = digit(rng);
    const std::vector<std::int64_t> shifted(w.begin() + 1, w.end());
    EXPECT_EQ(mult_decode(ctx, shifted).value, mult_apply(ctx, mult_decode(ctx, w).value));
  }
}

TEST_P(MultProperties, EncodedPointsFollowTheShift) {
  const MultContext ctx(GetParam());
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 100);
  std::uniform_int_distribution<long> den(2, 10000);
  for (int i = 0; i < 50; ++i) {
    const long b = den(rng);
    const Rational x = frac(std::uniform_int_distribution<long>(0, b - 1)(rng), b);
    const auto here = mult_encode(ctx, x, 24);
    const auto there = mult_encode(ctx, mult_apply(ctx, x), 23);
    if (!std::holds_alternative<std::vector<std::int64_t>>(here)) continue;
    const auto w = digits_of(here);
    ASSERT_TRUE(std::holds_alternative<std::vector<std::int64_t>>(there));
    EXPECT_EQ(digits_of(there), std::vector<std::int64_t>(w.begin() + 1, w.end()));
    EXPECT_TRUE(mult_decode(ctx, w).contains(x));
  }
}

TEST_P(MultProperties, ContinuityOfDecoding) {
  // Words sharing k leading digits decode within n^{-k} of each other.
  const MultContext ctx(GetParam());
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 200);
  std::uniform_int_distribution<std::int64_t> digit(0, ctx.base() - 1);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::int64_t> a(24);
    for (auto& s : a) s = digit(rng);
    auto b = a;
    const std::size_t k = 1 + static_cast<std::size_t>(i % 23);
    for (std::size_t j = k; j < b.size(); ++j) b[j] = digit(rng);
    const Rational gap = (mult_decode(ctx, a).value - mult_decode(ctx, b).value).abs();
    EXPECT_LE(gap, mult_decode(ctx, std::vector<std::int64_t>(k, 0)).width);
  }
}

TEST_P(MultProperties, EveryWordIsHit) {
  const MultContext ctx(GetParam());
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 300);
  std::uniform_int_distribution<std::int64_t> digit(0, ctx.base() - 1);
  for (int i = 0; i < 50; ++i) {
    std::vector<std::int64_t> w(24);
    for (auto& s : w) s = digit(rng);
    const auto d = mult_decode(ctx, w);
    // An interior point of the interval whose orbit avoids the cut points.
    const Rational x = d.value + d.width * frac(1, 3);
    const auto res = mult_encode(ctx, x, 24);
    ASSERT_TRUE(std::holds_alternative<std::vector<std::int64_t>>(res));
    EXPECT_EQ(digits_of(res), w);
  }
}

TEST_P(MultProperties, AtMostTwoPreimages) {
  const MultContext ctx(GetParam());
  const std::int64_t n = ctx.base();
  const std::size_t len = n == 2 ? 10 : (n == 3 ? 6 : 3);
  for (long a = 1; a < n; ++a) {
    const Rational x = frac(a, n);
    const auto res = mult_encode(ctx, x, 24);
    ASSERT_TRUE(std::holds_alternative<MultAmbiguity>(res));
    const auto& amb = std::get<MultAmbiguity>(res);
    EXPECT_NE(amb.upper, amb.lower);
    EXPECT_TRUE(mult_decode(ctx, amb.upper).contains(x));
    EXPECT_TRUE(mult_decode(ctx, amb.lower).contains(x));
    EXPECT_EQ(covering_words(ctx, x, len), 2u);
  }
  EXPECT_EQ(covering_words(ctx, Rational(0), len), 2u);
}

TEST_P(MultProperties, GenericPointsHaveOnePreimage) {
  const MultContext ctx(GetParam());
  const std::int64_t n = ctx.base();
  const std::size_t len = n == 2 ? 10 : (n == 3 ? 6 : 3);
  for (const Rational& x : {frac(1, 7), frac(3, 7), frac(5, 11), frac(2, 13)}) {
    EXPECT_TRUE(std::holds_alternative<std::vector<std::int64_t>>(mult_encode(ctx, x, 24)));
    EXPECT_EQ(covering_words(ctx, x, len), 1u);
  }
}

TEST_P(MultProperties, NaiveDecodeIsStrictlyLarger) {
  const MultContext ctx(GetParam());
  const std::int64_t n = ctx.base();
  // A word over {0, n-1} that is not constant: its cylinder avoids 0, the naive set does not.
  std::vector<std::int64_t> w(24, 0);
  for (std::size_t k = 0; k < w.size(); k += 3) w[k] = n - 1;
  const auto d = mult_decode(ctx, w);
  EXPECT_FALSE(d.contains(Rational(0)));
  EXPECT_TRUE(naive_decode_contains(ctx, w, Rational(0)));
  const Rational inside = d.value + d.width * frac(1, 3);
  EXPECT_TRUE(naive_decode_contains(ctx, w, inside));
  // The nested intersection rejects 0 already at the first digit.
  EXPECT_FALSE(naive_decode_contains(ctx, std::vector<std::int64_t>(24, 0), d.value));
}

INSTANTIATE_TEST_SUITE_P(Bases, MultProperties, ::testing::Values(2, 3, 10));

TEST(MultNaive, MiddleDigitsExcludeZero) {
  const MultContext ctx(3);
  EXPECT_FALSE(naive_decode_contains(ctx, {1, 0, 2}, Rational(0)));
  EXPECT_TRUE(naive_decode_contains(ctx, {2, 0, 2}, Rational(0)));
}
