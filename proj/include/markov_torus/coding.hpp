#pragma once

// Symbolic coding of torus points by the cells of a Markov construction.
//
// All geometry runs in normalized coordinates y = x K^{-1}, where the map is
// the acting matrix eps * P'. Distances and diameters are measured there.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "markov_torus/construct.hpp"

namespace markov_torus {

class CodingContext {
 public:
  explicit CodingContext(MarkovConstruction mc)
      : mc_(std::move(mc)),
        act_(action_in_frame(mc_.refined.frame(), mc_.acting)),
        inverse_(mc_.acting.inverse()),
        diameter_(diameter(mc_.refined)) {}

  const MarkovConstruction& construction() const { return mc_; }
  const TorusPartition& partition() const { return mc_.refined; }
  const TransitionGraph& graph() const { return mc_.graph_nstar; }
  const DiagonalAction& action() const { return act_; }
  const QuadReal& expansive_constant() const { return mc_.eigen.expansive_constant; }
  /// d(R*)^2.
  const QuadReal& diameter_squared() const { return diameter_.squared; }
  const Mat2Z& acting() const { return mc_.acting; }
  const Mat2Z& acting_inverse() const { return inverse_; }

  /// phi^k y reduced to [0, 1)^2, for a point y in normalized coordinates.
  PlanePoint iterate(const PlanePoint& y, std::int64_t k) const {
    PlanePoint q = reduce_mod_one(y);
    const Mat2Z& step = k >= 0 ? mc_.acting : inverse_;
    for (std::int64_t i = 0; i < (k >= 0 ? k : -k); ++i) q = apply_auto(step, q, true);
    return q;
  }

  /// Least n with d(R*) |mu|^n < c / 2, c = |mu| / 8 the expansive constant.
  std::size_t separation_depth() const {
    const QuadReal mu2 = act_.mu * act_.mu;
    const QuadReal target = mu2 / QuadReal(256);
    QuadReal value = diameter_.squared;
    std::size_t n = 0;
    while (value >= target) {
      value *= mu2;
      ++n;
    }
    return n;
  }

 private:
  MarkovConstruction mc_;
  DiagonalAction act_;
  Mat2Z inverse_;
  DiameterInfo diameter_;
};

/// Orbit landed on a cell boundary at `index`; every cell whose closure holds that orbit point.
struct BoundaryAmbiguity {
  std::int64_t index = 0;
  std::vector<std::size_t> choices;
};

using EncodeResult = std::variant<BiWord, BoundaryAmbiguity>;

/// Cells visited by phi^k p for -n <= k <= n; p is in original coordinates.
///
/// Boundary hits are reported for the first affected index in the order 0, 1, -1, 2, -2, ...
inline EncodeResult encode(const CodingContext& ctx, const PlanePoint& p, std::size_t depth) {
  const auto n = static_cast<std::int64_t>(depth);
  const PlanePoint y = reduce_mod_one(ctx.construction().to_normalized(p));
  std::vector<Membership> hits(2 * depth + 1);
  PlanePoint fwd = y;
  PlanePoint bwd = y;
  for (std::int64_t k = 0; k <= n; ++k) {
    if (k > 0) {
      fwd = apply_auto(ctx.acting(), fwd, true);
      bwd = apply_auto(ctx.acting_inverse(), bwd, true);
    }
    hits[static_cast<std::size_t>(n + k)] = membership(ctx.partition(), fwd);
    if (k > 0) hits[static_cast<std::size_t>(n - k)] = membership(ctx.partition(), bwd);
  }
  for (std::int64_t step = 0; step <= 2 * n; ++step) {
    const std::int64_t k = (step % 2 == 1) ? (step + 1) / 2 : -(step / 2);
    const Membership& m = hits[static_cast<std::size_t>(n + k)];
    if (m.is_boundary()) return BoundaryAmbiguity{k, m.closures};
  }
  BiWord w{-n, {}};
  for (const auto& m : hits) w.symbols.push_back(*m.element);
  return w;
}

struct DecodeResult {
  EigenRect box;              // closure of the cylinder, inside the lift of R*_{s_0} when 0 is covered
  PlanePoint center;          // normalized coordinates
  PlanePoint center_original;
  QuadReal diameter_bound_squared;  // (d(R*) |mu|^{min(n+, n-)})^2
  double diameter_bound = 0;
};

inline DecodeResult decode(const CodingContext& ctx, const BiWord& w) {
  if (!is_admissible(ctx.graph(), w)) throw std::domain_error("word is not admissible");
  const auto boxes = cylinder(ctx.partition(), ctx.action(), w);
  if (boxes.size() != 1)
    throw invariant_violation("admissible word decodes to " + std::to_string(boxes.size()) + " pieces");
  DecodeResult out;
  out.box = boxes.front();
  out.center = ctx.partition().frame().from_eigen(out.box.center());
  out.center_original = ctx.construction().from_normalized(out.center);
  const std::int64_t forward = std::max<std::int64_t>(0, w.last_index());
  const std::int64_t backward = std::max<std::int64_t>(0, -w.first_index());
  const QuadReal mu2 = ctx.action().mu * ctx.action().mu;
  out.diameter_bound_squared = ctx.diameter_squared();
  for (std::int64_t k = 0; k < std::min(forward, backward); ++k) out.diameter_bound_squared *= mu2;
  out.diameter_bound = std::sqrt(out.diameter_bound_squared.to_double());
  return out;
}

/// Squared distance from the box center to the lift of p (original coordinates) inside the closed box,
/// or nullopt when no lift of p lies in it.
inline std::optional<QuadReal> distance_squared_in_box(const CodingContext& ctx, const DecodeResult& r,
                                                       const PlanePoint& p) {
  const EigenFrame& frame = ctx.partition().frame();
  const EigenCoord e = frame.to_eigen(ctx.construction().to_normalized(p));
  const auto approx = frame.approx_plane(e.u.to_double(), e.w.to_double());
  const PlaneBounds pb{approx[0], approx[0], approx[1], approx[1]};
  std::optional<QuadReal> best;
  for (const auto& t : candidate_translates(pb, plane_bounds(frame, r.box))) {
    const EigenCoord lt = lattice_coord(frame, t);
    const EigenCoord local{e.u - lt.u, e.w - lt.w};
    if (!r.box.contains_closed(local)) continue;
    const PlanePoint diff = frame.from_eigen(local) - r.center;
    QuadReal d = dot(diff, diff);
    if (!best || d < *best) best = std::move(d);
  }
  return best;
}

/// Admissible words s_{-n..n} whose closed cylinder contains p (original coordinates).
inline std::vector<BiWord> preimage_codings(const CodingContext& ctx, const PlanePoint& p, std::size_t depth) {
  const auto n = static_cast<std::int64_t>(depth);
  const PlanePoint y = reduce_mod_one(ctx.construction().to_normalized(p));
  const EigenFrame& frame = ctx.partition().frame();
  const EigenCoord ye = frame.to_eigen(y);
  // Closure of an intersection sits inside the intersection of closures, so each
  // index can only carry a cell whose closure holds the orbit point.
  std::vector<std::vector<std::size_t>> candidates(2 * depth + 1);
  for (std::int64_t k = -n; k <= n; ++k)
    candidates[static_cast<std::size_t>(k + n)] = membership(ctx.partition(), ctx.iterate(y, k)).closures;

  // A prefix whose closed cylinder misses p cannot be completed.
  auto holds_point = [&](const BiWord& w) {
    for (const auto& box : cylinder(ctx.partition(), ctx.action(), w))
      if (closed_contains_mod_lattice(frame, box, ye)) return true;
    return false;
  };

  std::vector<BiWord> out;
  std::vector<std::size_t> word;
  std::function<void()> walk = [&]() {
    if (word.size() == candidates.size()) {
      out.push_back(BiWord{-n, word});
      return;
    }
    for (std::size_t s : candidates[word.size()]) {
      if (!word.empty() && ctx.graph().at(word.back(), s) == 0) continue;
      word.push_back(s);
      if (word.size() == 1 || holds_point(BiWord{-n, word})) walk();
      word.pop_back();
    }
  };
  walk();
  return out;
}

/// Agreement at k and m, disagreement at some l between them, and closed cylinders that meet.
inline bool has_diamond(const CodingContext& ctx, const BiWord& a, const BiWord& b) {
  if (a.offset != b.offset || a.symbols.size() != b.symbols.size())
    throw std::invalid_argument("has_diamond: words must share offset and length");
  const std::size_t len = a.symbols.size();
  std::optional<std::size_t> first_agree;
  bool pattern = false;
  bool disagreement_after_agree = false;
  for (std::size_t i = 0; i < len && !pattern; ++i) {
    if (a.symbols[i] == b.symbols[i]) {
      if (first_agree && disagreement_after_agree) pattern = true;
      if (!first_agree) first_agree = i;
    } else if (first_agree) {
      disagreement_after_agree = true;
    }
  }
  if (!pattern) return false;
  const auto ra = cylinder(ctx.partition(), ctx.action(), a);
  const auto rb = cylinder(ctx.partition(), ctx.action(), b);
  for (const auto& x : ra)
    for (const auto& y : rb)
      if (closed_overlap_mod_lattice(ctx.partition().frame(), x, y)) return true;
  return false;
}

}  // namespace markov_torus
