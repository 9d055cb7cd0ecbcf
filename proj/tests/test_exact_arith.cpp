#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "markov_torus/continued_fraction.hpp"
#include "markov_torus/quad_real.hpp"
#include "markov_torus/rational.hpp"

using namespace markov_torus;

namespace {

QuadReal q(long a, long b, long c, long d, std::int64_t disc) {
  return QuadReal(Rational(BigInt(a), BigInt(b)), Rational(BigInt(c), BigInt(d)), disc);
}

const QuadReal kPhi = q(1, 2, 1, 2, 5);
const QuadReal kPhiBar = q(1, 2, -1, 2, 5);

QuadReal random_quad(std::mt19937_64& rng, std::int64_t disc, long max_num = 50, long max_den = 12) {
  std::uniform_int_distribution<long> num(-max_num, max_num);
  std::uniform_int_distribution<long> den(1, max_den);
  return q(num(rng), den(rng), num(rng), den(rng), disc);
}

// Finite continued fraction a_0 + 1/(a_1 + ... + 1/(a_k + 1/tail)).
QuadReal evaluate_with_tail(const std::vector<BigInt>& terms, const QuadReal& tail) {
  QuadReal value = tail;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) value = QuadReal(*it) + QuadReal(1) / value;
  return value;
}

}  // namespace

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("3/6"), Rational(BigInt(1), BigInt(2)));
  EXPECT_EQ(Rational::parse(" -0.125 "), Rational(BigInt(-1), BigInt(8)));
  EXPECT_EQ(Rational::parse("7"), Rational(7));
  EXPECT_THROW(Rational::parse("x/2"), std::invalid_argument);
  EXPECT_THROW(Rational::parse(""), std::invalid_argument);
  EXPECT_THROW(Rational(BigInt(1), BigInt(0)), arithmetic_error);
}

TEST(Rational, FloorCeilFraction) {
  const Rational x(BigInt(-7), BigInt(2));
  EXPECT_EQ(x.floor(), -4);
  EXPECT_EQ(x.ceil(), -3);
  EXPECT_EQ(x.fractional_part(), Rational(BigInt(1), BigInt(2)));
  EXPECT_EQ(Rational(3).floor(), 3);
  EXPECT_EQ(Rational(3).ceil(), 3);
}

TEST(QuadReal, ConjugateRootsMultiplyToMinusOne) {
  EXPECT_EQ(kPhi * kPhiBar, QuadReal(-1));
  EXPECT_EQ(kPhi + kPhiBar, QuadReal(1));
}

TEST(QuadReal, AdditiveIdentity) {
  EXPECT_EQ(kPhi + QuadReal(0), kPhi);
  EXPECT_EQ(QuadReal(0) + kPhi, kPhi);
}

TEST(QuadReal, GoldenSquare) {
  // (1 + s)^2 / 4 = (1 + 2 s + 5) / 4 = (3 + s) / 2 with s = sqrt 5.
  EXPECT_EQ(kPhi * kPhi, q(3, 2, 1, 2, 5));
  EXPECT_EQ(kPhi * kPhi, kPhi + QuadReal(1));
}

TEST(QuadReal, Division) {
  EXPECT_EQ(QuadReal(1) / kPhi, kPhi - QuadReal(1));
  EXPECT_THROW(kPhi / QuadReal(0), arithmetic_error);
}

TEST(QuadReal, SignExamples) {
  EXPECT_EQ(q(1, 1, -1, 1, 2).sign(), -1);
  EXPECT_EQ(QuadReal(Rational(0), Rational(0), 5).sign(), 0);
  EXPECT_EQ(kPhi.sign(), 1);
  // 99 - 70 sqrt 2 is about 0.00505 and positive; 99^2 = 9801 > 9800 = 2 * 70^2.
  EXPECT_EQ(q(99, 1, -70, 1, 2).sign(), 1);
  EXPECT_EQ(q(-99, 1, 70, 1, 2).sign(), -1);
}

TEST(QuadReal, FloorExamples) {
  EXPECT_EQ(kPhi.floor(), 1);
  EXPECT_EQ(QuadReal(Rational(BigInt(7), BigInt(2))).floor(), 3);
  EXPECT_EQ((-kPhi).floor(), -2);
  EXPECT_EQ(kPhi.ceil(), 2);
}

TEST(QuadReal, MismatchedFieldsThrow) {
  EXPECT_THROW(QuadReal::root(2) + QuadReal::root(5), context_error);
  EXPECT_THROW((void)(QuadReal::root(2) == QuadReal::root(3)), context_error);
  EXPECT_NO_THROW(QuadReal::root(2) + QuadReal(Rational(BigInt(1), BigInt(3))));
}

TEST(QuadReal, RejectsInvalidDiscriminants) {
  EXPECT_THROW(QuadReal::root(4), std::domain_error);
  EXPECT_THROW(QuadReal::root(-3), std::domain_error);
  EXPECT_THROW(QuadReal(Rational(0), Rational(1), 0), std::domain_error);
}

TEST(QuadReal, Rendering) {
  EXPECT_EQ(kPhi.str(), "1/2 + 1/2*sqrt(5)");
  EXPECT_EQ(kPhi.decimal(12), "1.618033988750");
  EXPECT_EQ(kPhiBar.decimal(12), "-0.618033988750");
  EXPECT_EQ(QuadReal(Rational(BigInt(-1), BigInt(3))).decimal(3), "-0.333");
  EXPECT_EQ(QuadReal(Rational(BigInt(3), BigInt(2))).str(), "3/2");
}

TEST(QuadRealProperty, SignAgreesWithFloatsWhenWellSeparated) {
  std::mt19937_64 rng(7);
  for (std::int64_t disc : {2, 5, 13, 21}) {
    for (int i = 0; i < 300; ++i) {
      const QuadReal x = random_quad(rng, disc);
      const QuadReal y = random_quad(rng, disc);
      const double dx = x.to_double();
      const double dy = y.to_double();
      if (std::fabs(dx - dy) <= 1e-6) continue;
      EXPECT_EQ((x - y).sign(), dx < dy ? -1 : 1) << x.str() << " vs " << y.str();
    }
  }
}

TEST(QuadRealProperty, FloorBracketsValue) {
  std::mt19937_64 rng(11);
  for (std::int64_t disc : {2, 5, 12, 77}) {
    for (int i = 0; i < 300; ++i) {
      const QuadReal x = random_quad(rng, disc);
      const QuadReal f(x.floor());
      EXPECT_LE(f, x);
      EXPECT_LT(x, f + QuadReal(1));
    }
  }
}

TEST(QuadRealProperty, FloorOfLargeValues) {
  // Far beyond double precision, so the float guess cannot be trusted.
  const QuadReal big = kPhi * QuadReal(BigInt("1000000000000000000000", 10));
  const QuadReal f(big.floor());
  EXPECT_LE(f, big);
  EXPECT_LT(big, f + QuadReal(1));
}

TEST(QuadRealProperty, FieldAxioms) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    const QuadReal x = random_quad(rng, 5);
    const QuadReal y = random_quad(rng, 5);
    const QuadReal z = random_quad(rng, 5);
    EXPECT_EQ((x + y) + z, x + (y + z));
    EXPECT_EQ(x * (y + z), x * y + x * z);
    EXPECT_EQ(x * y, y * x);
    if (!y.is_zero()) {
      EXPECT_EQ((x / y) * y, x);
    }
  }
}

TEST(ContinuedFraction, GoldenRatio) {
  const auto cf = cf_expand(kPhi);
  EXPECT_TRUE(cf.preperiod.empty());
  EXPECT_EQ(cf.period, std::vector<BigInt>{1});
}

TEST(ContinuedFraction, SquareRootTwo) {
  const auto cf = cf_expand(QuadReal::root(2));
  EXPECT_EQ(cf.preperiod, std::vector<BigInt>{1});
  EXPECT_EQ(cf.period, std::vector<BigInt>{2});
}

TEST(ContinuedFraction, ReciprocalGoldenRatio) {
  const auto cf = cf_expand(kPhi - QuadReal(1));
  EXPECT_EQ(cf.preperiod, std::vector<BigInt>{0});
  EXPECT_EQ(cf.period, std::vector<BigInt>{1});
}

TEST(ContinuedFraction, RejectsRationals) { EXPECT_THROW(cf_expand(QuadReal(3)), std::domain_error); }

TEST(ContinuedFraction, CanonicalPeriodRotates) {
  ContinuedFraction cf{{}, {BigInt(3), BigInt(1), BigInt(2)}};
  EXPECT_EQ(cf.canonical_period(), (std::vector<BigInt>{1, 2, 3}));
}

TEST(ContinuedFractionProperty, PeriodReproducesTheSurd) {
  std::mt19937_64 rng(17);
  for (std::int64_t disc : {2, 3, 5, 7, 13, 21, 45, 77}) {
    for (int i = 0; i < 25; ++i) {
      // Small coefficients keep the period short; it grows like the square root of the scaled discriminant.
      QuadReal x = random_quad(rng, disc, 20, 3);
      if (x.is_rational()) continue;
      const auto cf = cf_expand(x);
      ASSERT_FALSE(cf.period.empty());
      // Strip the preperiod exactly: y_{k+1} = 1 / (y_k - a_k).
      QuadReal y = x;
      for (const auto& a : cf.preperiod) {
        ASSERT_EQ(y.floor(), a);
        y = QuadReal(1) / (y - QuadReal(a));
      }
      EXPECT_EQ(evaluate_with_tail(cf.preperiod, y), x);
      // One full period returns to the same surd.
      EXPECT_EQ(evaluate_with_tail(cf.period, y), y) << x.str();
      // Convergents approach x.
      const double err3 = std::fabs(cf.convergent(3).to_double() - x.to_double());
      const double err12 = std::fabs(cf.convergent(12).to_double() - x.to_double());
      EXPECT_LE(err12, err3 + 1e-15);
      EXPECT_LT(err12, 1e-4);
    }
  }
}
