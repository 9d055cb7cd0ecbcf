#pragma once

// Partitions of the torus by parallelograms whose sides follow the eigen-directions.
//
// Every element is an open box in eigen-coordinates of a frame. A partition is
// read modulo Z^2: the box is one lift, and all lattice translates of it
// represent the same subset of the torus.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "markov_torus/sft.hpp"
#include "markov_torus/torus.hpp"

namespace markov_torus {

/// A construction or refinement produced an object that the theory rules out.
class invariant_violation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using LatticeVec = std::array<std::int64_t, 2>;

/// Open box (u_min, u_max) x (w_min, w_max) in eigen-coordinates.
struct EigenRect {
  QuadReal u_min;
  QuadReal u_max;
  QuadReal w_min;
  QuadReal w_max;
  LatticeVec anchor{0, 0};  // lattice copy this lift was cut from

  EigenRect() = default;
  EigenRect(QuadReal u0, QuadReal u1, QuadReal w0, QuadReal w1, LatticeVec anch = {0, 0})
      : u_min(std::move(u0)), u_max(std::move(u1)), w_min(std::move(w0)), w_max(std::move(w1)), anchor(anch) {}

  /// Box spanned by two opposite corners, in either order; rejects degenerate boxes.
  static EigenRect spanning(const EigenCoord& p, const EigenCoord& q) {
    EigenRect r(min(p.u, q.u), max(p.u, q.u), min(p.w, q.w), max(p.w, q.w));
    if (r.is_empty()) throw std::domain_error("degenerate eigen box");
    return r;
  }

  bool is_empty() const { return u_min >= u_max || w_min >= w_max; }
  QuadReal u_width() const { return u_max - u_min; }
  QuadReal w_width() const { return w_max - w_min; }
  EigenCoord center() const {
    const QuadReal half(Rational(BigInt(1), BigInt(2)));
    return {(u_min + u_max) * half, (w_min + w_max) * half};
  }
  std::array<EigenCoord, 4> corners() const {
    return {EigenCoord{u_min, w_min}, EigenCoord{u_max, w_min}, EigenCoord{u_max, w_max}, EigenCoord{u_min, w_max}};
  }

  bool contains_open(const EigenCoord& p) const { return u_min < p.u && p.u < u_max && w_min < p.w && p.w < w_max; }
  bool contains_closed(const EigenCoord& p) const {
    return u_min <= p.u && p.u <= u_max && w_min <= p.w && p.w <= w_max;
  }
  /// Closure of other inside closure of this.
  bool contains_closed(const EigenRect& o) const {
    return u_min <= o.u_min && o.u_max <= u_max && w_min <= o.w_min && o.w_max <= w_max;
  }

  EigenRect translated(const EigenCoord& t) const {
    return {u_min + t.u, u_max + t.u, w_min + t.w, w_max + t.w, anchor};
  }

  friend bool operator==(const EigenRect& a, const EigenRect& b) {
    return a.u_min == b.u_min && a.u_max == b.u_max && a.w_min == b.w_min && a.w_max == b.w_max;
  }
};

inline EigenRect intersect(const EigenRect& a, const EigenRect& b) {
  return {max(a.u_min, b.u_min), min(a.u_max, b.u_max), max(a.w_min, b.w_min), min(a.w_max, b.w_max), a.anchor};
}
inline bool open_overlap(const EigenRect& a, const EigenRect& b) { return !intersect(a, b).is_empty(); }
inline bool closed_overlap(const EigenRect& a, const EigenRect& b) {
  return max(a.u_min, b.u_min) <= min(a.u_max, b.u_max) && max(a.w_min, b.w_min) <= min(a.w_max, b.w_max);
}

/// Image of a box under the diagonal map (u, w) -> (lambda^k u, mu^k w); k may be negative.
inline EigenRect map_box(const EigenRect& r, const DiagonalAction& act, int k = 1) {
  QuadReal su(1);
  QuadReal sw(1);
  for (int i = 0; i < std::abs(k); ++i) {
    su *= act.lambda;
    sw *= act.mu;
  }
  if (k < 0) {
    su = QuadReal(1) / su;
    sw = QuadReal(1) / sw;
  }
  QuadReal u0 = r.u_min * su;
  QuadReal u1 = r.u_max * su;
  QuadReal w0 = r.w_min * sw;
  QuadReal w1 = r.w_max * sw;
  if (su.sign() < 0) std::swap(u0, u1);
  if (sw.sign() < 0) std::swap(w0, w1);
  return {std::move(u0), std::move(u1), std::move(w0), std::move(w1), r.anchor};
}

inline EigenCoord map_coord(const EigenCoord& p, const DiagonalAction& act, int k = 1) {
  EigenCoord out = p;
  for (int i = 0; i < std::abs(k); ++i) {
    if (k > 0) {
      out.u *= act.lambda;
      out.w *= act.mu;
    } else {
      out.u /= act.lambda;
      out.w /= act.mu;
    }
  }
  return out;
}

/// Floating bounding rectangle of a box's image in the plane.
struct PlaneBounds {
  double xmin = 0;
  double xmax = 0;
  double ymin = 0;
  double ymax = 0;
};

inline PlaneBounds plane_bounds(const EigenFrame& frame, const EigenRect& r) {
  const double u0 = r.u_min.to_double();
  const double u1 = r.u_max.to_double();
  const double w0 = r.w_min.to_double();
  const double w1 = r.w_max.to_double();
  PlaneBounds b{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (double u : {u0, u1}) {
    for (double w : {w0, w1}) {
      const auto p = frame.approx_plane(u, w);
      b.xmin = std::min(b.xmin, p[0]);
      b.xmax = std::max(b.xmax, p[0]);
      b.ymin = std::min(b.ymin, p[1]);
      b.ymax = std::max(b.ymax, p[1]);
    }
  }
  return b;
}

/// Lattice vectors t for which b + t might meet a; widened by 1 on each side.
inline std::vector<LatticeVec> candidate_translates(const PlaneBounds& a, const PlaneBounds& b) {
  const auto m0 = static_cast<std::int64_t>(std::floor(a.xmin - b.xmax)) - 1;
  const auto m1 = static_cast<std::int64_t>(std::ceil(a.xmax - b.xmin)) + 1;
  const auto n0 = static_cast<std::int64_t>(std::floor(a.ymin - b.ymax)) - 1;
  const auto n1 = static_cast<std::int64_t>(std::ceil(a.ymax - b.ymin)) + 1;
  std::vector<LatticeVec> out;
  out.reserve(static_cast<std::size_t>((m1 - m0 + 1) * (n1 - n0 + 1)));
  for (std::int64_t m = m0; m <= m1; ++m)
    for (std::int64_t n = n0; n <= n1; ++n) out.push_back({m, n});
  return out;
}

inline EigenCoord lattice_coord(const EigenFrame& frame, const LatticeVec& t) {
  return frame.lattice(static_cast<long>(t[0]), static_cast<long>(t[1]));
}

/// Finitely many labelled open boxes in one frame, read modulo Z^2.
class TorusPartition {
 public:
  TorusPartition() = default;
  TorusPartition(EigenFrame frame, std::vector<EigenRect> elements, std::vector<std::string> labels = {})
      : frame_(std::move(frame)), elements_(std::move(elements)), labels_(std::move(labels)) {
    if (elements_.empty()) throw std::invalid_argument("partition needs at least one element");
    for (const auto& e : elements_)
      if (e.is_empty()) throw std::invalid_argument("partition element is empty");
    if (labels_.empty())
      for (std::size_t i = 0; i < elements_.size(); ++i) labels_.push_back(std::to_string(i));
    if (labels_.size() != elements_.size()) throw std::invalid_argument("label count does not match elements");
    bounds_.reserve(elements_.size());
    for (const auto& e : elements_) bounds_.push_back(plane_bounds(frame_, e));
    disc_ = frame_.determinant().disc();
  }

  const EigenFrame& frame() const { return frame_; }
  const std::vector<EigenRect>& elements() const { return elements_; }
  const EigenRect& element(std::size_t i) const { return elements_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  const PlaneBounds& bounds(std::size_t i) const { return bounds_.at(i); }
  std::size_t size() const { return elements_.size(); }
  std::int64_t disc() const { return disc_; }

  QuadReal area(std::size_t i) const { return box_area(elements_.at(i)); }
  QuadReal box_area(const EigenRect& r) const { return r.u_width() * r.w_width() * frame_.determinant().abs(); }
  QuadReal total_area() const {
    QuadReal sum(0);
    for (std::size_t i = 0; i < size(); ++i) sum += area(i);
    return sum;
  }

  /// Lattice translates t with box + t meeting element j (open semantics), together with the overlap.
  std::vector<std::pair<LatticeVec, EigenRect>> translates_meeting(const EigenRect& box, const PlaneBounds& box_bounds,
                                                                   std::size_t j) const {
    std::vector<std::pair<LatticeVec, EigenRect>> out;
    for (const auto& t : candidate_translates(box_bounds, bounds_[j])) {
      const EigenRect moved = elements_[j].translated(lattice_coord(frame_, t));
      EigenRect inter = intersect(box, moved);
      if (!inter.is_empty()) out.emplace_back(t, std::move(inter));
    }
    return out;
  }

  /// First pair of distinct lifts whose open boxes meet, as (i, j, t); nullopt when pairwise disjoint.
  std::optional<std::tuple<std::size_t, std::size_t, LatticeVec>> find_overlap() const {
    for (std::size_t i = 0; i < size(); ++i) {
      for (std::size_t j = i; j < size(); ++j) {
        for (const auto& [t, inter] : translates_meeting(elements_[i], bounds_[i], j)) {
          if (i == j && t[0] == 0 && t[1] == 0) continue;
          return std::make_tuple(i, j, t);
        }
      }
    }
    return std::nullopt;
  }

 private:
  EigenFrame frame_;
  std::vector<EigenRect> elements_;
  std::vector<std::string> labels_;
  std::vector<PlaneBounds> bounds_;
  std::int64_t disc_ = 0;
};

/// Result of locating a point: the open element containing it, or every element whose closure does.
struct Membership {
  std::optional<std::size_t> element;
  std::vector<std::size_t> closures;
  LatticeVec translate{0, 0};  // p - t lies in the reported element's lift (first closure on a boundary hit)
  bool is_boundary() const { return !element.has_value(); }
};

inline Membership membership(const TorusPartition& part, const EigenCoord& p) {
  const auto approx = part.frame().approx_plane(p.u.to_double(), p.w.to_double());
  const PlaneBounds pb{approx[0], approx[0], approx[1], approx[1]};
  Membership out;
  bool have_translate = false;
  for (std::size_t i = 0; i < part.size(); ++i) {
    const EigenRect& e = part.element(i);
    for (const auto& t : candidate_translates(pb, part.bounds(i))) {
      const EigenCoord lt = lattice_coord(part.frame(), t);
      const EigenCoord local{p.u - lt.u, p.w - lt.w};
      if (!e.contains_closed(local)) continue;
      if (e.contains_open(local)) {
        Membership hit;
        hit.element = i;
        hit.closures = {i};
        hit.translate = t;
        return hit;
      }
      if (std::find(out.closures.begin(), out.closures.end(), i) == out.closures.end()) out.closures.push_back(i);
      if (!have_translate) {
        out.translate = t;
        have_translate = true;
      }
    }
  }
  if (out.closures.empty()) throw invariant_violation("point is covered by no partition element");
  return out;
}

inline Membership membership(const TorusPartition& part, const PlanePoint& p) {
  return membership(part, part.frame().to_eigen(p));
}

/// Closed-box membership modulo Z^2.
inline bool closed_contains_mod_lattice(const EigenFrame& frame, const EigenRect& box, const EigenCoord& p) {
  const auto approx = frame.approx_plane(p.u.to_double(), p.w.to_double());
  const PlaneBounds pb{approx[0], approx[0], approx[1], approx[1]};
  for (const auto& t : candidate_translates(pb, plane_bounds(frame, box))) {
    const EigenCoord lt = lattice_coord(frame, t);
    if (box.contains_closed(EigenCoord{p.u - lt.u, p.w - lt.w})) return true;
  }
  return false;
}

/// Closed boxes meet somewhere on the torus.
inline bool closed_overlap_mod_lattice(const EigenFrame& frame, const EigenRect& a, const EigenRect& b) {
  for (const auto& t : candidate_translates(plane_bounds(frame, a), plane_bounds(frame, b)))
    if (closed_overlap(a, b.translated(lattice_coord(frame, t)))) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Cylinders

/// One connected piece of a forward cylinder s_0..s_k, tracked in the lift of R_{s_k}.
///
/// The points of the torus it stands for are phi^{-k}(box + shift); shift is
/// the accumulated lattice vector in eigen-coordinates.
struct CylinderPiece {
  EigenRect box;
  EigenCoord shift;
  std::optional<EigenCoord> shift_at_zero;
};

inline std::vector<CylinderPiece> start_cylinder(const TorusPartition& part, std::size_t symbol, bool at_zero) {
  CylinderPiece piece{part.element(symbol), EigenCoord{QuadReal(0), QuadReal(0)}, std::nullopt};
  if (at_zero) piece.shift_at_zero = piece.shift;
  return {piece};
}

/// Pieces after appending one symbol.
inline std::vector<CylinderPiece> extend_cylinder(const TorusPartition& part, const DiagonalAction& act,
                                                  const std::vector<CylinderPiece>& pieces, std::size_t symbol,
                                                  bool at_zero) {
  std::vector<CylinderPiece> out;
  for (const auto& piece : pieces) {
    const EigenRect image = map_box(piece.box, act);
    const EigenCoord shift = map_coord(piece.shift, act);
    for (auto& [t, inter] : part.translates_meeting(image, plane_bounds(part.frame(), image), symbol)) {
      const EigenCoord lt = lattice_coord(part.frame(), t);
      CylinderPiece next{inter.translated(EigenCoord{-lt.u, -lt.w}), EigenCoord{shift.u + lt.u, shift.w + lt.w},
                         piece.shift_at_zero};
      if (next.shift_at_zero) next.shift_at_zero = map_coord(*next.shift_at_zero, act);
      if (at_zero) next.shift_at_zero = next.shift;
      next.box.anchor = {0, 0};
      out.push_back(std::move(next));
    }
  }
  return out;
}

/// Pieces of the set of points whose orbit visits R_{s_k} at every index k of the word.
inline std::vector<CylinderPiece> forward_pieces(const TorusPartition& part, const DiagonalAction& act,
                                                 const BiWord& w) {
  if (w.symbols.empty()) throw std::invalid_argument("empty word");
  for (auto s : w.symbols)
    if (s >= part.size()) throw std::domain_error("symbol " + std::to_string(s) + " outside the partition");
  std::vector<CylinderPiece> pieces = start_cylinder(part, w.symbols[0], w.offset == 0);
  for (std::size_t k = 1; k < w.symbols.size() && !pieces.empty(); ++k)
    pieces = extend_cylinder(part, act, pieces, w.symbols[k], w.offset + static_cast<std::int64_t>(k) == 0);
  return pieces;
}

/// The cylinder of a word as boxes in index-0 coordinates.
///
/// When the word covers index 0 the boxes are placed inside the lift of
/// R_{s_0}; otherwise they are phi^{-first}(...) of the lift of R_{s_first}.
inline std::vector<EigenRect> cylinder(const TorusPartition& part, const DiagonalAction& act, const BiWord& w) {
  std::vector<EigenRect> out;
  const auto last = w.last_index();
  for (const auto& piece : forward_pieces(part, act, w)) {
    EigenRect r = piece.box.translated(piece.shift);
    if (piece.shift_at_zero) {
      // shift_at_zero was carried forward to the last index; undo that before subtracting.
      r = r.translated(EigenCoord{-piece.shift_at_zero->u, -piece.shift_at_zero->w});
    }
    r = map_box(r, act, -static_cast<int>(last));
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<EigenRect> cylinder(const TorusPartition& part, const Mat2Z& m, const BiWord& w) {
  return cylinder(part, action_in_frame(part.frame(), m), w);
}

/// 0/1 graph with i -> j iff R_i meets phi^{-1} R_j.
inline TransitionGraph transition_graph(const TorusPartition& part, const Mat2Z& m) {
  const DiagonalAction act = action_in_frame(part.frame(), m);
  const std::size_t n = part.size();
  std::vector<std::int64_t> entries(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const EigenRect image = map_box(part.element(i), act);
    const PlaneBounds ib = plane_bounds(part.frame(), image);
    for (std::size_t j = 0; j < n; ++j) entries[i * n + j] = part.translates_meeting(image, ib, j).empty() ? 0 : 1;
  }
  return TransitionGraph(n, entries, part.labels());
}

/// Number of connected components of R_i meeting phi^{-1} R_j.
inline TransitionGraph component_counts(const TorusPartition& part, const Mat2Z& m) {
  const DiagonalAction act = action_in_frame(part.frame(), m);
  const std::size_t n = part.size();
  std::vector<std::int64_t> entries(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const EigenRect image = map_box(part.element(i), act);
    const PlaneBounds ib = plane_bounds(part.frame(), image);
    for (std::size_t j = 0; j < n; ++j)
      entries[i * n + j] = static_cast<std::int64_t>(part.translates_meeting(image, ib, j).size());
  }
  return TransitionGraph(n, entries, part.labels());
}

// ---------------------------------------------------------------------------
// Refinement

struct RefinementCell {
  BiWord word;
  EigenRect rect;
};

/// Components of R_{s_0} meeting phi^{-1} R_{s_1}, ..., phi^{-(n-1)} R_{s_{n-1}} over all words of length n.
///
/// Cells are ordered by word (lexicographic) and then by u_min. n = 1 returns the elements.
inline std::vector<RefinementCell> refine_depth(const TorusPartition& part, const Mat2Z& m, std::size_t n) {
  if (n == 0) throw std::invalid_argument("refinement depth must be positive");
  const DiagonalAction act = action_in_frame(part.frame(), m);
  std::vector<RefinementCell> out;
  std::vector<std::size_t> word;
  std::function<void(const std::vector<CylinderPiece>&)> walk = [&](const std::vector<CylinderPiece>& pieces) {
    if (pieces.empty()) return;
    if (word.size() == n) {
      std::vector<EigenRect> boxes;
      for (const auto& piece : pieces)
        boxes.push_back(map_box(piece.box.translated(piece.shift), act, -static_cast<int>(n - 1)));
      std::sort(boxes.begin(), boxes.end(), [](const EigenRect& a, const EigenRect& b) { return a.u_min < b.u_min; });
      for (auto& b : boxes) out.push_back({BiWord{0, word}, std::move(b)});
      return;
    }
    for (std::size_t j = 0; j < part.size(); ++j) {
      word.push_back(j);
      walk(extend_cylinder(part, act, pieces, j, false));
      word.pop_back();
    }
  };
  for (std::size_t j = 0; j < part.size(); ++j) {
    word = {j};
    walk(start_cylinder(part, j, true));
  }
  return out;
}

/// R v phi^{-1} R: one cell per component of R_i meeting phi^{-1} R_j.
inline std::vector<RefinementCell> refine(const TorusPartition& part, const Mat2Z& m) {
  return refine_depth(part, m, 2);
}

inline TorusPartition partition_from_cells(const EigenFrame& frame, const std::vector<RefinementCell>& cells,
                                           std::vector<std::string> labels = {}) {
  std::vector<EigenRect> rects;
  rects.reserve(cells.size());
  for (const auto& c : cells) rects.push_back(c.rect);
  return TorusPartition(frame, std::move(rects), std::move(labels));
}

// ---------------------------------------------------------------------------
// Verifiers

struct NFoldReport {
  bool ok = true;
  std::optional<BiWord> witness;  // admissible pairwise, empty as a whole
  std::size_t words_checked = 0;
};

/// Checks every word of length 3..n whose consecutive pairs are admissible for a nonempty cylinder.
inline NFoldReport verify_nfold(const TorusPartition& part, const Mat2Z& m, std::size_t n) {
  if (n < 3) throw std::invalid_argument("verify_nfold: n must be at least 3");
  const DiagonalAction act = action_in_frame(part.frame(), m);
  const TransitionGraph g = transition_graph(part, m);
  NFoldReport report;
  std::vector<std::size_t> word;
  std::function<bool(const std::vector<CylinderPiece>&)> walk = [&](const std::vector<CylinderPiece>& pieces) {
    if (word.size() == n) return true;
    const std::size_t last = word.back();
    for (std::size_t j = 0; j < part.size(); ++j) {
      if (g.at(last, j) == 0) continue;
      word.push_back(j);
      auto next = extend_cylinder(part, act, pieces, j, false);
      if (word.size() >= 3) ++report.words_checked;
      if (next.empty()) {
        report.ok = false;
        report.witness = BiWord{0, word};
        return false;
      }
      if (!walk(next)) return false;
      word.pop_back();
    }
    return true;
  };
  for (std::size_t i = 0; i < part.size(); ++i) {
    word = {i};
    if (!walk(start_cylinder(part, i, true))) break;
  }
  return report;
}

struct PropertyMReport {
  bool ok = true;
  std::string failure;
};

namespace detail {

// A side of a box: the coordinate `level` is fixed and the other one runs over [lo, hi].
struct Side {
  QuadReal level;
  QuadReal lo;
  QuadReal hi;
};

// Is the closed segment covered by translates of the given sides? `vertical` means u is fixed.
inline bool segment_covered(const TorusPartition& part, const Side& seg, bool vertical,
                            const std::vector<std::pair<Side, std::size_t>>& sides) {
  const EigenCoord end0 = vertical ? EigenCoord{seg.level, seg.lo} : EigenCoord{seg.lo, seg.level};
  const EigenCoord end1 = vertical ? EigenCoord{seg.level, seg.hi} : EigenCoord{seg.hi, seg.level};
  const auto p0 = part.frame().approx_plane(end0.u.to_double(), end0.w.to_double());
  const auto p1 = part.frame().approx_plane(end1.u.to_double(), end1.w.to_double());
  const PlaneBounds sb{std::min(p0[0], p1[0]), std::max(p0[0], p1[0]), std::min(p0[1], p1[1]),
                       std::max(p0[1], p1[1])};
  std::vector<std::pair<QuadReal, QuadReal>> pieces;
  for (const auto& [side, owner] : sides) {
    for (const auto& t : candidate_translates(sb, part.bounds(owner))) {
      const EigenCoord lt = lattice_coord(part.frame(), t);
      const QuadReal& level_shift = vertical ? lt.u : lt.w;
      const QuadReal& run_shift = vertical ? lt.w : lt.u;
      if (side.level + level_shift != seg.level) continue;
      QuadReal lo = side.lo + run_shift;
      QuadReal hi = side.hi + run_shift;
      if (hi < seg.lo || lo > seg.hi) continue;
      pieces.emplace_back(std::move(lo), std::move(hi));
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  QuadReal reach = seg.lo;
  for (const auto& [lo, hi] : pieces) {
    if (lo > reach) return false;
    if (hi > reach) reach = hi;
    if (reach >= seg.hi) return true;
  }
  return reach >= seg.hi;
}

}  // namespace detail

/// Boundary form of property M: the map carries the contracting sides into the boundary and
/// its inverse carries the expanding sides into the boundary.
///
/// Fails at once when m does not act diagonally in the partition's frame, since
/// then the sides do not split into the two invariant families.
inline PropertyMReport verify_property_M_boundaries(const TorusPartition& part, const Mat2Z& m) {
  const auto act = try_action_in_frame(part.frame(), m);
  if (!act) return {false, "partition sides are not aligned with the eigen-directions of " + m.str()};
  std::vector<std::pair<detail::Side, std::size_t>> vsides;
  std::vector<std::pair<detail::Side, std::size_t>> hsides;
  for (std::size_t i = 0; i < part.size(); ++i) {
    const EigenRect& e = part.element(i);
    vsides.push_back({{e.u_min, e.w_min, e.w_max}, i});
    vsides.push_back({{e.u_max, e.w_min, e.w_max}, i});
    hsides.push_back({{e.w_min, e.u_min, e.u_max}, i});
    hsides.push_back({{e.w_max, e.u_min, e.u_max}, i});
  }
  for (const auto& [side, owner] : vsides) {
    QuadReal lo = side.lo * act->mu;
    QuadReal hi = side.hi * act->mu;
    if (hi < lo) std::swap(lo, hi);
    const detail::Side image{side.level * act->lambda, lo, hi};
    if (!detail::segment_covered(part, image, true, vsides))
      return {false, "image of a contracting side of element " + part.labels()[owner] + " leaves the boundary"};
  }
  for (const auto& [side, owner] : hsides) {
    QuadReal lo = side.lo / act->lambda;
    QuadReal hi = side.hi / act->lambda;
    if (hi < lo) std::swap(lo, hi);
    const detail::Side image{side.level / act->mu, lo, hi};
    if (!detail::segment_covered(part, image, false, hsides))
      return {false, "preimage of an expanding side of element " + part.labels()[owner] + " leaves the boundary"};
  }
  return {};
}

/// Squared Euclidean length of the longer diagonal of a box.
inline QuadReal box_diagonal_squared(const EigenFrame& frame, const EigenRect& r) {
  const PlanePoint a = r.u_width() * frame.first();
  const PlanePoint b = r.w_width() * frame.second();
  return max(dot(a + b, a + b), dot(a - b, a - b));
}

struct DiameterInfo {
  QuadReal squared;    // exact
  double value = 0;    // sqrt(squared)
  std::size_t element = 0;
};

/// Largest element diagonal.
inline DiameterInfo diameter(const TorusPartition& part) {
  DiameterInfo out;
  for (std::size_t i = 0; i < part.size(); ++i) {
    QuadReal d = box_diagonal_squared(part.frame(), part.element(i));
    if (i == 0 || d > out.squared) {
      out.squared = std::move(d);
      out.element = i;
    }
  }
  out.value = std::sqrt(out.squared.to_double());
  return out;
}

struct DecayRow {
  std::size_t n = 0;
  QuadReal measured_squared;  // largest diagonal over cylinders s_{-n..n}
  QuadReal bound_squared;     // (d(R) |mu|^n)^2
  bool widths_exact = true;   // every checked cylinder has widths |mu|^n times the end-element widths
  std::size_t cylinders_checked = 0;
  bool ok() const { return widths_exact && measured_squared <= bound_squared; }
};

/// Diameters of the cylinders of R v phi R v phi^{-1} R ... at half-depth n = 0..depth.
///
/// A cylinder s_{-n..n} has u-width |mu|^n u(R_{s_n}) and w-width |mu|^n w(R_{s_{-n}}).
/// That bookkeeping is checked exactly on every cylinder while the count stays
/// under `enumerate_cap`, and on one witness cylinder per reachable end pair after that;
/// the measured diameter is the largest diagonal among the witnesses.
inline std::vector<DecayRow> verify_generator_decay(const TorusPartition& part, const Mat2Z& m, std::size_t depth,
                                                    std::size_t enumerate_cap = 4000) {
  const DiagonalAction act = action_in_frame(part.frame(), m);
  const TransitionGraph g = transition_graph(part, m);
  const std::size_t size = part.size();
  const QuadReal amu = act.mu.abs();
  const DiameterInfo base = diameter(part);
  std::vector<DecayRow> rows;

  QuadReal scale(1);  // |mu|^n
  for (std::size_t n = 0; n <= depth; ++n, scale *= amu) {
    DecayRow row;
    row.n = n;
    row.bound_squared = base.squared * scale * scale;
    const std::size_t len = 2 * n + 1;
    // reach[k][v][j]: a path of k steps leads from v to j.
    std::vector<std::vector<std::vector<char>>> reach(len, std::vector<std::vector<char>>(size, std::vector<char>(size, 0)));
    for (std::size_t v = 0; v < size; ++v) reach[0][v][v] = 1;
    for (std::size_t k = 1; k < len; ++k)
      for (std::size_t v = 0; v < size; ++v)
        for (std::size_t x = 0; x < size; ++x)
          if (g.at(v, x) > 0)
            for (std::size_t j = 0; j < size; ++j)
              if (reach[k - 1][x][j]) reach[k][v][j] = 1;

    auto check = [&](const std::vector<std::size_t>& word) {
      const BiWord w{-static_cast<std::int64_t>(n), word};
      const auto boxes = cylinder(part, act, w);
      ++row.cylinders_checked;
      if (boxes.size() != 1) {
        row.widths_exact = false;
        return;
      }
      const EigenRect& b = boxes.front();
      if (b.u_width() != scale * part.element(word.back()).u_width() ||
          b.w_width() != scale * part.element(word.front()).w_width())
        row.widths_exact = false;
      QuadReal d = box_diagonal_squared(part.frame(), b);
      if (row.cylinders_checked == 1 || d > row.measured_squared) row.measured_squared = std::move(d);
    };

    const BigInt total = count_blocks(g, len);
    if (total <= BigInt(static_cast<unsigned long>(enumerate_cap))) {
      for (const auto& word : admissible_blocks(g, len)) check(word);
    } else {
      for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
          if (!reach[len - 1][i][j]) continue;
          std::vector<std::size_t> word{i};
          for (std::size_t k = 1; k < len; ++k) {
            const std::size_t v = word.back();
            for (std::size_t x = 0; x < size; ++x) {
              if (g.at(v, x) > 0 && reach[len - 1 - k][x][j]) {
                word.push_back(x);
                break;
              }
            }
          }
          check(word);
        }
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace markov_torus
