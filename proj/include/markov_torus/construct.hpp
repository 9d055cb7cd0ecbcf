#pragma once

// Markov partitions by two parallelograms for hyperbolic toral automorphisms.
//
// Pipeline: conjugate A to +-P with P >= 0, swap coordinates if the expanding
// eigenline of P passes above (1, 1), build the two-parallelogram fundamental
// region R_I, R_II, and refine once to get R*.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "markov_torus/continued_fraction.hpp"
#include "markov_torus/partition.hpp"
#include "markov_torus/sft.hpp"
#include "markov_torus/torus.hpp"

namespace markov_torus {

/// A construction step failed one of its exact checks.
class construction_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Signs of (lambda, mu) for the acting matrix eps * P.
enum class SignCase { I, II, III, IV };

inline std::string to_string(SignCase c) {
  switch (c) {
    case SignCase::I: return "I";
    case SignCase::II: return "II";
    case SignCase::III: return "III";
    case SignCase::IV: return "IV";
  }
  return "?";
}

/// C A C^{-1} = epsilon P with P >= 0.
struct ConjugationResult {
  Mat2Z C;
  Mat2Z P;
  int epsilon = 1;
  bool swapped = false;
  std::string method;  // "identity", "continued-fraction" or "lattice-search"
};

namespace detail {

inline Mat2Z cf_step(const BigInt& a) { return {BigInt(0), BigInt(1), BigInt(1), a}; }

inline std::optional<ConjugationResult> accept_conjugate(const Mat2Z& A, const Mat2Z& C, std::string method) {
  const Mat2Z B = C * A * C.inverse();
  if (B.is_nonnegative()) return ConjugationResult{C, B, 1, false, std::move(method)};
  const Mat2Z nB = -B;
  if (nB.is_nonnegative()) return ConjugationResult{C, nB, -1, false, std::move(method)};
  return std::nullopt;
}

}  // namespace detail

/// Conjugator from the continued fraction of the expanding slope, or nullopt if its check fails.
///
/// With rows acting on the left, v C^{-1} applies the steps M(a_0)^{-1}, M(a_1)^{-1}, ...
/// in turn, each sending slope m to 1/(m - a). So C = M(a_n) ... M(a_0) moves the
/// expanding eigenline to a purely periodic slope, and CAC^{-1} is then +-Q^N with
/// Q = M(b_m) ... M(b_1) the period product.
inline std::optional<ConjugationResult> conjugate_by_continued_fraction(const Mat2Z& A) {
  const EigenData e = hyperbolic_check(A);
  const ContinuedFraction cf = cf_expand(e.slope_lambda);
  Mat2Z C = Mat2Z::identity();
  for (const auto& a : cf.preperiod) C = detail::cf_step(a) * C;
  Mat2Z Q = Mat2Z::identity();
  for (const auto& b : cf.period) Q = detail::cf_step(b) * Q;

  const Mat2Z B = C * A * C.inverse();
  const BigInt target = abs_big(A.trace());
  Mat2Z QN = Q;
  // N is the least power whose trace matches |trace A|; traces of Q^N grow strictly.
  for (int guard = 0; guard < 200 && abs_big(QN.trace()) <= target; ++guard) {
    if (abs_big(QN.trace()) == target) {
      if (B == QN) return ConjugationResult{C, QN, 1, false, "continued-fraction"};
      if (B == -QN) return ConjugationResult{C, QN, -1, false, "continued-fraction"};
    }
    QN = QN * Q;
  }
  return std::nullopt;
}

/// Conjugator from a cone of lattice vectors around the expanding eigenline.
///
/// Rows c1, c2 of C form a unimodular pair bracketing v_lambda; B = CAC^{-1} is
/// non-negative (or non-positive) exactly when A maps the cone spanned by c1, c2
/// into itself (or into its negative). Mediants narrow the cone toward the
/// eigenline until that happens or an entry exceeds `bound`.
inline std::optional<ConjugationResult> conjugate_by_lattice_search(const Mat2Z& A, long bound = 10000) {
  const EigenData e = hyperbolic_check(A);
  const PlanePoint d = e.v_lambda;
  const std::array<std::array<long, 2>, 4> axes{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
  auto as_point = [](const BigInt& x, const BigInt& y) { return PlanePoint{QuadReal(x), QuadReal(y)}; };
  BigInt c1x, c1y, c2x, c2y;
  bool found = false;
  for (std::size_t k = 0; k < 4 && !found; ++k) {
    const auto& p = axes[k];
    const auto& q = axes[(k + 1) % 4];
    const PlanePoint pp = as_point(BigInt(p[0]), BigInt(p[1]));
    const PlanePoint qq = as_point(BigInt(q[0]), BigInt(q[1]));
    if (cross(pp, d).sign() > 0 && cross(d, qq).sign() > 0) {
      c1x = p[0];
      c1y = p[1];
      c2x = q[0];
      c2y = q[1];
      found = true;
    }
  }
  if (!found) return std::nullopt;  // eigenline on an axis; impossible for irrational slopes
  while (abs_big(c1x) <= bound && abs_big(c1y) <= bound && abs_big(c2x) <= bound && abs_big(c2y) <= bound) {
    const Mat2Z C{c1x, c1y, c2x, c2y};
    if (auto r = detail::accept_conjugate(A, C, "lattice-search")) return r;
    const BigInt mx = c1x + c2x;
    const BigInt my = c1y + c2y;
    if (cross(as_point(mx, my), d).sign() > 0) {
      c1x = mx;
      c1y = my;
    } else {
      c2x = mx;
      c2y = my;
    }
  }
  return std::nullopt;
}

/// C, P >= 0 and epsilon with C A C^{-1} = epsilon P.
inline ConjugationResult conjugate_nonnegative(const Mat2Z& A) {
  hyperbolic_check(A);
  if (A.is_nonnegative()) return {Mat2Z::identity(), A, 1, false, "identity"};
  if ((-A).is_nonnegative()) return {Mat2Z::identity(), -A, -1, false, "identity"};
  if (auto r = conjugate_by_continued_fraction(A)) return *r;
  if (auto r = conjugate_by_lattice_search(A)) return *r;
  throw construction_error("no non-negative conjugate found for " + A.str());
}

/// E P E when the expanding eigenline of P is steeper than the diagonal.
inline std::pair<Mat2Z, bool> orient_for_construction(const Mat2Z& P) {
  if (!P.is_nonnegative()) throw std::domain_error("orient_for_construction: matrix has a negative entry");
  const EigenData e = hyperbolic_check(P);
  if (e.slope_lambda > QuadReal(1)) return {Mat2Z::swap() * P * Mat2Z::swap(), true};
  return {P, false};
}

struct CornerPoint {
  std::string name;
  EigenCoord eigen;
  PlanePoint plane;
};

struct BasePartition {
  TorusPartition partition;  // elements "I", "II"
  SignCase sign_case = SignCase::I;
  std::vector<CornerPoint> corners;
  QuadReal rho;            // 0 unless mu < 0
  DiagonalAction action;   // of eps * P in the frame
};

inline const CornerPoint& find_corner(const std::vector<CornerPoint>& corners, const std::string& name) {
  for (const auto& c : corners)
    if (c.name == name) return c;
  throw std::out_of_range("no corner point named " + name);
}

/// The principal fundamental region R_I = a c d' b', R_II = c' d' b'' a'' for the map eps * P.
///
/// In eigen-coordinates (U, W) of a lattice vector the named points are
///   a = 0, c = (0, W01), b = (0, -W10), d-bar = (0, W01 - W10), c-bar = (-U01, 0),
/// and the primed points are their lattice translates. When mu < 0 every point
/// except o, o', o'', o''' is moved by rho v_mu, where rho makes d-bar + rho v_mu
/// the fixed point of the map on l_mu:
///   (delta + rho) mu = rho  with d-bar = delta v_mu,  so  rho = delta mu / (1 - mu).
inline BasePartition build_base_partition(const Mat2Z& P, int eps) {
  if (eps != 1 && eps != -1) throw std::invalid_argument("epsilon must be +1 or -1");
  if (!P.is_nonnegative()) throw std::domain_error("build_base_partition: matrix has a negative entry");
  const EigenData e = hyperbolic_check(P);
  if (e.slope_lambda > QuadReal(1)) throw std::domain_error("build_base_partition: matrix is not oriented");
  const EigenFrame frame = EigenFrame::from_eigen_data(e);
  const Mat2Z acting = eps > 0 ? P : Mat2Z(-P);
  const DiagonalAction act = action_in_frame(frame, acting);

  BasePartition out;
  out.action = act;
  const bool mu_negative = act.mu.sign() < 0;
  out.sign_case = eps > 0 ? (mu_negative ? SignCase::II : SignCase::I) : (mu_negative ? SignCase::IV : SignCase::III);

  const EigenCoord l10 = frame.lattice(1, 0);
  const EigenCoord l01 = frame.lattice(0, 1);
  const EigenCoord l11 = frame.lattice(1, 1);
  const QuadReal zero(0);
  out.rho = zero;
  if (mu_negative) {
    const QuadReal delta = l01.w - l10.w;
    out.rho = delta * act.mu / (QuadReal(1) - act.mu);
  }
  const QuadReal& rho = out.rho;

  auto add = [&](const std::string& name, EigenCoord c, bool moves) {
    if (moves) c.w += rho;
    out.corners.push_back({name, c, frame.from_eigen(c)});
  };
  add("o", {zero, zero}, false);
  add("o'", l10, false);
  add("o''", l11, false);
  add("o'''", l01, false);
  add("a", {zero, zero}, true);
  add("a'", l10, true);
  add("a''", l11, true);
  add("a'''", l01, true);
  add("b", {zero, -l10.w}, true);
  add("b'", {l10.u, zero}, true);
  add("b''", {l11.u, l01.w}, true);
  add("c", {zero, l01.w}, true);
  add("c'", {l10.u, l11.w}, true);
  add("c-bar", {-l01.u, zero}, true);
  add("d-bar", {zero, l01.w - l10.w}, true);
  add("d'", {l10.u, l01.w}, true);
  add("d*", {l10.u - l01.u, zero}, true);

  const auto& corner = [&](const std::string& n) { return find_corner(out.corners, n).eigen; };
  std::vector<EigenRect> rects{EigenRect::spanning(corner("a"), corner("d'")),
                               EigenRect::spanning(corner("c'"), corner("b''"))};
  out.partition = TorusPartition(frame, std::move(rects), {"I", "II"});

  if (out.partition.total_area() != QuadReal(1))
    throw construction_error("fundamental region check failed: total area " + out.partition.total_area().str());
  if (auto hit = out.partition.find_overlap())
    throw construction_error("fundamental region check failed: translates of elements " +
                             std::to_string(std::get<0>(*hit)) + " and " + std::to_string(std::get<1>(*hit)) +
                             " overlap");
  if (mu_negative) {
    // o must lie on the closed segment from a to b along l_mu.
    const QuadReal& wa = corner("a").w;
    const QuadReal& wb = corner("b").w;
    if (!(min(wa, wb) <= zero && zero <= max(wa, wb)))
      throw construction_error("translated region leaves o outside the segment ab");
  }
  return out;
}

struct MarkovConstruction {
  Mat2Z A;
  ConjugationResult conj;       // conj.P is the non-negative conjugate before orientation
  Mat2Z oriented;               // P, or E P E when swapped
  Mat2Z acting;                 // eps * oriented; the map in normalized coordinates
  Mat2Z K;                      // K A K^{-1} = acting; a point x maps to x K^{-1}
  Mat2Z K_inverse;
  EigenData eigen;              // of the acting matrix
  SignCase sign_case = SignCase::I;
  TorusPartition base;
  std::vector<CornerPoint> corners;
  QuadReal rho;
  TorusPartition refined;       // R*
  std::vector<std::pair<std::size_t, std::size_t>> cell_class;  // (i, j): cell lies in R_i and meets phi^{-1} R_j
  TransitionGraph graph_2node;  // multiplicities, labelled like conj.P
  TransitionGraph graph_nstar;  // 0/1 graph on R*

  std::size_t nstar() const { return refined.size(); }
  PlanePoint to_normalized(const PlanePoint& p) const { return multiply(p, K_inverse); }
  PlanePoint from_normalized(const PlanePoint& p) const { return multiply(p, K); }
};

/// Full pipeline for a hyperbolic A.
inline MarkovConstruction build_markov_construction(const Mat2Z& A) {
  MarkovConstruction mc;
  mc.A = A;
  mc.conj = conjugate_nonnegative(A);
  if (mc.conj.C * A * mc.conj.C.inverse() != (mc.conj.epsilon > 0 ? mc.conj.P : Mat2Z(-mc.conj.P)))
    throw construction_error("conjugation identity failed for " + A.str());
  auto [oriented, swapped] = orient_for_construction(mc.conj.P);
  mc.conj.swapped = swapped;
  mc.oriented = oriented;
  mc.acting = mc.conj.epsilon > 0 ? oriented : Mat2Z(-oriented);
  mc.K = swapped ? Mat2Z::swap() * mc.conj.C : mc.conj.C;
  mc.K_inverse = mc.K.inverse();
  mc.eigen = hyperbolic_check(mc.acting);

  BasePartition base = build_base_partition(oriented, mc.conj.epsilon);
  mc.sign_case = base.sign_case;
  mc.base = base.partition;
  mc.corners = std::move(base.corners);
  mc.rho = base.rho;

  const auto cells = refine(mc.base, mc.acting);
  std::vector<std::string> labels;
  std::vector<std::int64_t> counts(4, 0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    labels.push_back(std::to_string(k + 1));
    const std::size_t i = cells[k].word.symbols[0];
    const std::size_t j = cells[k].word.symbols[1];
    mc.cell_class.emplace_back(i, j);
    ++counts[i * 2 + j];
  }
  mc.refined = partition_from_cells(mc.base.frame(), cells, labels);
  if (swapped) counts = {counts[3], counts[2], counts[1], counts[0]};
  mc.graph_2node = TransitionGraph(2, counts, {"I", "II"});
  mc.graph_nstar = transition_graph(mc.refined, mc.acting);

  const Mat2Z& P = mc.conj.P;
  const std::vector<std::int64_t> expected{to_int64(P.a), to_int64(P.b), to_int64(P.c), to_int64(P.d)};
  if (mc.graph_2node.entries() != expected)
    throw construction_error("component counts do not reproduce " + P.str() + " for " + A.str());
  if (mc.refined.total_area() != QuadReal(1)) throw construction_error("refined cells do not have total area 1");
  return mc;
}

/// Counts of phi R_i meeting R_j read off from the lattice lines crossed by phi R_i.
///
/// phi R_i is one parallelogram in the plane. Its pieces inside translates of
/// R_I are separated by the vertical lines x = m and those inside translates of
/// R_II by the horizontal lines y = m, once the region is shifted back by
/// (xi, eta) = rho v_mu. So the count is the number of integers strictly inside
/// the shifted x-range (resp. y-range). Negative line families in Cases III/IV
/// are covered because the range is not assumed positive.
/// Returned as (p, q, r, s) in the labelling of conj.P.
inline std::array<BigInt, 4> count_intersections(const MarkovConstruction& mc) {
  const EigenFrame& frame = mc.base.frame();
  const DiagonalAction act = action_in_frame(frame, mc.acting);
  const PlanePoint offset = frame.from_eigen({QuadReal(0), mc.rho});
  auto strictly_inside = [](const QuadReal& lo, const QuadReal& hi) { return BigInt(hi.ceil() - lo.floor() - 1); };
  std::array<BigInt, 4> out;
  for (std::size_t i = 0; i < 2; ++i) {
    const EigenRect image = map_box(mc.base.element(i), act);
    std::optional<QuadReal> xmin, xmax, ymin, ymax;
    for (const auto& c : image.corners()) {
      const PlanePoint p = frame.from_eigen(c);
      if (!xmin || p.x < *xmin) xmin = p.x;
      if (!xmax || p.x > *xmax) xmax = p.x;
      if (!ymin || p.y < *ymin) ymin = p.y;
      if (!ymax || p.y > *ymax) ymax = p.y;
    }
    out[i * 2 + 0] = strictly_inside(*xmin - offset.x, *xmax - offset.x);
    out[i * 2 + 1] = strictly_inside(*ymin - offset.y, *ymax - offset.y);
  }
  if (mc.conj.swapped) std::swap(out[0], out[3]), std::swap(out[1], out[2]);
  return out;
}

}  // namespace markov_torus
