#include <gtest/gtest.h>

#include <random>
#include <set>

#include "markov_torus/construct.hpp"
#include "suite_matrices.hpp"

using namespace markov_torus;

namespace {

const Mat2Z kFib(1L, 1L, 1L, 0L);

Mat2Z signed_target(const ConjugationResult& r) { return r.epsilon > 0 ? r.P : Mat2Z(-r.P); }

// Some C with entries in [-bound, bound], det +-1 and C A C^-1 = +-P for a non-negative P.
std::optional<Mat2Z> brute_force_conjugator(const Mat2Z& A, long bound) {
  for (long a = -bound; a <= bound; ++a)
    for (long b = -bound; b <= bound; ++b)
      for (long c = -bound; c <= bound; ++c)
        for (long d = -bound; d <= bound; ++d) {
          const long det = a * d - b * c;
          if (det != 1 && det != -1) continue;
          const Mat2Z C(a, b, c, d);
          const Mat2Z B = C * A * C.inverse();
          if (B.is_nonnegative() || (-B).is_nonnegative()) return C;
        }
  return std::nullopt;
}

Mat2Z random_hyperbolic(std::mt19937_64& rng, long range) {
  std::uniform_int_distribution<long> entry(-range, range);
  while (true) {
    const Mat2Z m(entry(rng), entry(rng), entry(rng), entry(rng));
    const BigInt det = m.det();
    if (det != 1 && det != -1) continue;
    try {
      hyperbolic_check(m);
      return m;
    } catch (const not_hyperbolic&) {
    }
  }
}

}  // namespace

TEST(Conjugation, NonNegativeInputUsesIdentity) {
  const auto r = conjugate_nonnegative(kFib);
  EXPECT_EQ(r.C, Mat2Z::identity());
  EXPECT_EQ(r.P, kFib);
  EXPECT_EQ(r.epsilon, 1);
}

TEST(Conjugation, NegatedFibonacci) {
  const auto r = conjugate_nonnegative(-kFib);
  EXPECT_EQ(r.epsilon, -1);
  EXPECT_EQ(r.P, kFib);
  EXPECT_EQ(r.C, Mat2Z::identity());
}

TEST(Conjugation, MixedSignMatrixAgreesWithBruteForce) {
  const Mat2Z A(3L, -1L, -2L, 1L);
  const auto oracle = brute_force_conjugator(A, 10);
  ASSERT_TRUE(oracle.has_value());
  const auto r = conjugate_nonnegative(A);
  EXPECT_EQ(r.C * A * r.C.inverse(), signed_target(r));
  EXPECT_TRUE(r.P.is_nonnegative());
  EXPECT_EQ(signed_target(r).trace(), A.trace());
  EXPECT_EQ(r.P.det(), A.det());
  EXPECT_EQ(r.method, "continued-fraction");
}

TEST(Conjugation, LatticeSearchIsAnIndependentRoute) {
  std::mt19937_64 rng(44);
  int found = 0;
  for (int i = 0; i < 30; ++i) {
    const Mat2Z A = random_hyperbolic(rng, 12);
    const auto r = conjugate_by_lattice_search(A);
    if (!r) continue;
    ++found;
    EXPECT_EQ(r->C * A * r->C.inverse(), signed_target(*r)) << A.str();
    EXPECT_TRUE(r->P.is_nonnegative());
  }
  EXPECT_GT(found, 20);
}

TEST(ConjugationProperty, RandomMatricesConjugateToNonNegative) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    const Mat2Z A = random_hyperbolic(rng, 30);
    const auto r = conjugate_nonnegative(A);
    EXPECT_EQ(r.C * A * r.C.inverse(), signed_target(r)) << A.str();
    EXPECT_TRUE(r.P.is_nonnegative());
    EXPECT_TRUE(r.C.is_unimodular());
    EXPECT_EQ(signed_target(r).trace(), A.trace());
    EXPECT_EQ(signed_target(r).det(), A.det());
  }
}

TEST(Conjugation, RejectsNonHyperbolic) {
  EXPECT_THROW(conjugate_nonnegative(Mat2Z(1L, 1L, 0L, 1L)), not_hyperbolic);
  EXPECT_THROW(build_markov_construction(Mat2Z(1L, 1L, 0L, 1L)), not_hyperbolic);
}

TEST(Orientation, Examples) {
  EXPECT_EQ(orient_for_construction(kFib), std::make_pair(kFib, false));
  const auto [swapped, did] = orient_for_construction(Mat2Z(0L, 1L, 1L, 1L));
  EXPECT_TRUE(did);
  EXPECT_EQ(swapped, kFib);
  EXPECT_EQ(orient_for_construction(swapped).second, false);
  EXPECT_THROW(orient_for_construction(Mat2Z(1L, -1L, -1L, 2L)), std::domain_error);
}

TEST(OrientationProperty, Idempotent) {
  for (const auto& m : suite::positive_suite()) {
    const auto once = orient_for_construction(m).first;
    EXPECT_EQ(orient_for_construction(once).first, once);
    EXPECT_LE(hyperbolic_check(once).slope_lambda, QuadReal(1));
  }
}

TEST(BasePartition, FibonacciIsCaseTwo) {
  const auto b = build_base_partition(kFib, 1);
  EXPECT_EQ(b.sign_case, SignCase::II);
  EXPECT_FALSE(b.rho.is_zero());
  EXPECT_EQ(b.partition.size(), 2u);
  EXPECT_EQ(b.partition.total_area(), QuadReal(1));
  EXPECT_LT(b.partition.area(1), b.partition.area(0));
}

TEST(BasePartition, CatMapIsCaseOne) {
  const auto b = build_base_partition(Mat2Z(2L, 1L, 1L, 1L), 1);
  EXPECT_EQ(b.sign_case, SignCase::I);
  EXPECT_TRUE(b.rho.is_zero());
}

TEST(BasePartition, RhoFixesTheTranslatedCorner) {
  // d-bar after the shift is fixed by the map along the contracting line.
  for (const auto& m : suite::full_suite()) {
    const auto mc = build_markov_construction(m);
    if (mc.rho.is_zero()) continue;
    const auto& dbar = find_corner(mc.corners, "d-bar").eigen;
    const auto& a = find_corner(mc.corners, "a").eigen;
    EXPECT_EQ(dbar.w * mc.eigen.mu, a.w) << m.str();
  }
}

TEST(BasePartition, CornerTranslates) {
  for (const auto& m : suite::full_suite()) {
    const auto mc = build_markov_construction(m);
    const PlanePoint b = find_corner(mc.corners, "b").plane;
    EXPECT_EQ(find_corner(mc.corners, "b'").plane, (b + PlanePoint{QuadReal(1), QuadReal(0)})) << m.str();
    EXPECT_EQ(find_corner(mc.corners, "b''").plane, (b + PlanePoint{QuadReal(1), QuadReal(1)})) << m.str();
    EXPECT_EQ(find_corner(mc.corners, "o'").plane, (PlanePoint{QuadReal(1), QuadReal(0)}));
  }
}

TEST(BasePartition, RejectsUnorientedOrNegative) {
  EXPECT_THROW(build_base_partition(Mat2Z(0L, 1L, 1L, 1L), 1), std::domain_error);
  EXPECT_THROW(build_base_partition(Mat2Z(1L, -1L, -1L, 2L), 1), std::domain_error);
  EXPECT_THROW(build_base_partition(kFib, 0), std::invalid_argument);
}

TEST(ConstructionProperty, CaseDispatchAndSegmentOrder) {
  for (const auto& m : suite::full_suite()) {
    const auto mc = build_markov_construction(m);
    const bool mu_negative = mc.eigen.mu.sign() < 0;
    const SignCase expected = mc.conj.epsilon > 0 ? (mu_negative ? SignCase::II : SignCase::I)
                                                  : (mu_negative ? SignCase::IV : SignCase::III);
    EXPECT_EQ(mc.sign_case, expected) << m.str();
    EXPECT_EQ(mc.rho.is_zero(), !mu_negative);
    if (mu_negative) {
      const QuadReal wa = find_corner(mc.corners, "a").eigen.w;
      const QuadReal wb = find_corner(mc.corners, "b").eigen.w;
      EXPECT_LE(min(wa, wb), QuadReal(0));
      EXPECT_GE(max(wa, wb), QuadReal(0));
    }
  }
}

TEST(ConstructionProperty, AllFourCasesOccurInTheSuite) {
  std::set<SignCase> seen;
  for (const auto& m : suite::full_suite()) seen.insert(build_markov_construction(m).sign_case);
  EXPECT_EQ(seen.size(), 4u);
}

TEST(Construction, FibonacciGraphs) {
  const auto mc = build_markov_construction(kFib);
  EXPECT_EQ(mc.nstar(), 3u);
  EXPECT_EQ(mc.graph_2node.entries(), (std::vector<std::int64_t>{1, 1, 1, 0}));
  EXPECT_EQ(mc.graph_nstar.size(), 3u);
  EXPECT_TRUE(mc.graph_nstar.is_zero_one());
  EXPECT_TRUE(is_irreducible(mc.graph_nstar));
}

TEST(Construction, CellCountsMatchEntrySums) {
  const std::vector<std::pair<Mat2Z, std::size_t>> expected{
      {Mat2Z(2L, 1L, 1L, 1L), 5}, {Mat2Z(1L, 2L, 1L, 1L), 5}, {Mat2Z(2L, 3L, 1L, 2L), 8},
      {Mat2Z(3L, 2L, 1L, 1L), 7}, {Mat2Z(1L, 1L, 1L, 2L), 5}};
  for (const auto& [m, n] : expected) {
    EXPECT_EQ(build_markov_construction(m).nstar(), n) << m.str();
    EXPECT_EQ(build_markov_construction(-m).nstar(), n) << m.str();
  }
}

TEST(Construction, NormalizedCoordinatesConjugateTheMap) {
  for (const auto& m : suite::full_suite()) {
    const auto mc = build_markov_construction(m);
    EXPECT_EQ(mc.K * mc.A * mc.K_inverse, mc.acting);
    const PlanePoint p{QuadReal(Rational(BigInt(2), BigInt(7))), QuadReal(Rational(BigInt(3), BigInt(11)))};
    EXPECT_EQ(mc.to_normalized(multiply(p, m)), multiply(mc.to_normalized(p), mc.acting));
    EXPECT_EQ(mc.from_normalized(mc.to_normalized(p)), p);
  }
}

TEST(Construction, SwappedInputUsesOrientation) {
  const auto mc = build_markov_construction(Mat2Z(0L, 1L, 1L, 1L));
  EXPECT_TRUE(mc.conj.swapped);
  EXPECT_EQ(mc.oriented, kFib);
  EXPECT_EQ(mc.graph_2node.entries(), (std::vector<std::int64_t>{0, 1, 1, 1}));
}

TEST(CountIntersections, Examples) {
  EXPECT_EQ(count_intersections(build_markov_construction(kFib)), (std::array<BigInt, 4>{1, 1, 1, 0}));
  EXPECT_EQ(count_intersections(build_markov_construction(Mat2Z(3L, 2L, 1L, 1L))), (std::array<BigInt, 4>{3, 2, 1, 1}));
}

TEST(CountIntersectionsProperty, MatchesTranslateEnumeration) {
  for (const auto& m : suite::full_suite()) {
    const auto mc = build_markov_construction(m);
    const auto counts = count_intersections(mc);
    const auto& P = mc.conj.P;
    EXPECT_EQ(counts, (std::array<BigInt, 4>{P.a, P.b, P.c, P.d})) << m.str();
    // Independent count: connected pieces of phi R_i in translates of R_j.
    auto components = component_counts(mc.base, mc.acting).entries();
    if (mc.conj.swapped) components = {components[3], components[2], components[1], components[0]};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(counts[k], components[k]) << m.str();
  }
}

TEST(CountIntersectionsProperty, OffDiagonalEntriesPositive) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 25; ++i) {
    const auto r = conjugate_nonnegative(random_hyperbolic(rng, 20));
    EXPECT_GT(r.P.b, 0);
    EXPECT_GT(r.P.c, 0);
    EXPECT_FALSE(r.P.a == 0 && r.P.d == 0);
  }
}

TEST(ConstructionProperty, TwoNodeSpectrumMatchesP) {
  for (const auto& m : suite::full_suite()) {
    const auto mc = build_markov_construction(m);
    const auto& P = mc.conj.P;
    const auto pd = perron_data(mc.graph_2node);
    EXPECT_EQ(pd.char_poly, (std::vector<BigInt>{1, BigInt(-P.trace()), P.det()}));
    EXPECT_NEAR(perron_data(mc.graph_nstar).spectral_radius, mc.eigen.lambda.abs().to_double(), 1e-10);
  }
}
