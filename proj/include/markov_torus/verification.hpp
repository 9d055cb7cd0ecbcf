#pragma once

// Runs every independent check on a construction and collects pass/fail lines.

#include <string>
#include <utility>
#include <vector>

#include "markov_torus/construct.hpp"

namespace markov_torus {

struct CheckResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

/// R_I with its expanding extent cut short by a fifth; used as a negative control.
inline TorusPartition broken_partition(const TorusPartition& base) {
  std::vector<EigenRect> rects = base.elements();
  EigenRect& r = rects.front();
  r.u_max = r.u_max - r.u_width() / QuadReal(5);
  return TorusPartition(base.frame(), std::move(rects), base.labels());
}

inline std::string word_text(const BiWord& w) {
  std::string s;
  for (std::size_t i = 0; i < w.symbols.size(); ++i) s += (i ? "," : "") + std::to_string(w.symbols[i]);
  return s + "@" + std::to_string(w.offset);
}

/// Checks at the given depth (>= 3). With `inject_broken` the base partition is replaced by
/// broken_partition(base) for the area and n-fold checks.
inline VerificationReport verify_construction(const MarkovConstruction& mc, std::size_t depth,
                                              bool inject_broken = false, std::size_t enumerate_cap = 4000) {
  VerificationReport rep;
  auto add = [&](std::string name, bool ok, std::string detail = {}) {
    rep.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const Mat2Z eP = mc.conj.epsilon > 0 ? mc.conj.P : Mat2Z(-mc.conj.P);
  add("conjugation", mc.conj.C * mc.A * mc.conj.C.inverse() == eP && mc.conj.P.is_nonnegative(),
      "C A C^-1 = " + eP.str());
  add("normalized-conjugation", mc.K * mc.A * mc.K_inverse == mc.acting, "K A K^-1 = " + mc.acting.str());

  const TorusPartition base = inject_broken ? broken_partition(mc.base) : mc.base;
  const QuadReal base_area = base.total_area();
  add("area-base", base_area == QuadReal(1), "total " + base_area.str());
  const auto overlap = base.find_overlap();
  add("disjoint-base", !overlap.has_value());
  add("area-refined", mc.refined.total_area() == QuadReal(1), "total " + mc.refined.total_area().str());
  for (std::size_t k = 2; k <= std::min<std::size_t>(depth, 4); ++k) {
    const auto cells = refine_depth(base, mc.acting, k);
    QuadReal sum(0);
    for (const auto& c : cells) sum += base.box_area(c.rect);
    add("area-depth-" + std::to_string(k), sum == QuadReal(1), std::to_string(cells.size()) + " cells, total " + sum.str());
  }

  const auto counts = count_intersections(mc);
  const Mat2Z& P = mc.conj.P;
  const bool counts_ok = counts[0] == P.a && counts[1] == P.b && counts[2] == P.c && counts[3] == P.d;
  add("line-counts", counts_ok,
      "(" + counts[0].get_str() + "," + counts[1].get_str() + "," + counts[2].get_str() + "," + counts[3].get_str() + ")");
  const std::vector<std::int64_t> expected{to_int64(P.a), to_int64(P.b), to_int64(P.c), to_int64(P.d)};
  add("graph-2node", mc.graph_2node.entries() == expected, P.str());
  add("cell-count", mc.nstar() == static_cast<std::size_t>(expected[0] + expected[1] + expected[2] + expected[3]),
      std::to_string(mc.nstar()) + " cells");

  const auto pm_base = verify_property_M_boundaries(base, mc.acting);
  add("property-M-base", pm_base.ok, pm_base.failure);
  const auto pm_ref = verify_property_M_boundaries(mc.refined, mc.acting);
  add("property-M-refined", pm_ref.ok, pm_ref.failure);

  const auto nf_base = verify_nfold(base, mc.acting, depth);
  add("nfold-base", nf_base.ok,
      nf_base.witness ? "witness " + word_text(*nf_base.witness) : std::to_string(nf_base.words_checked) + " words");
  const auto nf_ref = verify_nfold(mc.refined, mc.acting, depth);
  add("nfold-refined", nf_ref.ok,
      nf_ref.witness ? "witness " + word_text(*nf_ref.witness) : std::to_string(nf_ref.words_checked) + " words");

  const auto decay = verify_generator_decay(mc.refined, mc.acting, depth, enumerate_cap);
  bool decay_ok = true;
  for (const auto& row : decay) decay_ok = decay_ok && row.ok();
  add("generator-decay", decay_ok, "half-depth 0.." + std::to_string(depth));
  return rep;
}

}  // namespace markov_torus
