#pragma once

// Text formats, JSON reports, DOT graphs and SVG pictures.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "markov_torus/coding.hpp"
#include "markov_torus/construct.hpp"
#include "markov_torus/verification.hpp"

namespace markov_torus {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Parsing

/// "a b c d" (row-major, commas allowed) or JSON [[a,b],[c,d]].
inline Mat2Z parse_matrix(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\n");
  if (first != std::string::npos && text[first] == '[') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("bad matrix JSON: ") + e.what());
    }
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
        j[1].size() != 2)
      throw std::invalid_argument("matrix JSON must be [[a,b],[c,d]]");
    auto entry = [](const json& v) {
      if (v.is_number_integer()) return BigInt(std::to_string(v.get<long long>()), 10);
      if (v.is_string()) return BigInt(v.get<std::string>(), 10);
      throw std::invalid_argument("matrix entries must be integers");
    };
    return {entry(j[0][0]), entry(j[0][1]), entry(j[1][0]), entry(j[1][1])};
  }
  std::string cleaned = text;
  for (char& ch : cleaned)
    if (ch == ',') ch = ' ';
  std::istringstream in(cleaned);
  std::vector<BigInt> v;
  std::string tok;
  while (in >> tok) {
    try {
      v.emplace_back(tok, 10);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("bad matrix entry: " + tok);
    }
  }
  if (v.size() != 4) throw std::invalid_argument("matrix needs exactly four integers");
  return {v[0], v[1], v[2], v[3]};
}

/// "p/q r/s" (comma also accepted as separator).
inline PlanePoint parse_point(const std::string& text) {
  std::string cleaned = text;
  for (char& ch : cleaned)
    if (ch == ',') ch = ' ';
  std::istringstream in(cleaned);
  std::string x, y, extra;
  if (!(in >> x >> y) || (in >> extra)) throw std::invalid_argument("point needs two rational coordinates");
  return {QuadReal(Rational::parse(x)), QuadReal(Rational::parse(y))};
}

/// "i,j,k@offset"; the offset defaults to 0.
inline BiWord parse_word(const std::string& text) {
  BiWord w;
  std::string body = text;
  if (const auto at = text.find('@'); at != std::string::npos) {
    body = text.substr(0, at);
    try {
      w.offset = std::stoll(text.substr(at + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad word offset in " + text);
    }
  }
  std::istringstream in(body);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      const long long s = std::stoll(tok, &used);
      if (s < 0) throw std::invalid_argument("negative symbol");
      w.symbols.push_back(static_cast<std::size_t>(s));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad word symbol '" + tok + "'");
    }
  }
  if (w.symbols.empty()) throw std::invalid_argument("empty word");
  return w;
}

inline std::string format_word(const BiWord& w) { return word_text(w); }

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const QuadReal& q) { return {{"exact", q.str()}, {"decimal", q.decimal()}}; }
inline json to_json(const Rational& r) { return {{"exact", r.str()}, {"decimal", QuadReal(r).decimal()}}; }
inline json to_json(const PlanePoint& p) { return {{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }
inline json to_json(const EigenCoord& c) { return {{"u", to_json(c.u)}, {"w", to_json(c.w)}}; }

inline json to_json(const Mat2Z& m) {
  auto n = [](const BigInt& v) -> json {
    if (v.fits_slong_p()) return v.get_si();
    return v.get_str();
  };
  return json::array({json::array({n(m.a), n(m.b)}), json::array({n(m.c), n(m.d)})});
}

inline json to_json(const TransitionGraph& g) {
  return {{"size", g.size()}, {"entries", g.entries()}, {"labels", g.labels()}};
}

inline json to_json(const EigenFrame& frame, const EigenRect& r) {
  json corners = json::array();
  for (const auto& c : r.corners()) corners.push_back(to_json(frame.from_eigen(c)));
  return {{"u_min", to_json(r.u_min)}, {"u_max", to_json(r.u_max)}, {"w_min", to_json(r.w_min)},
          {"w_max", to_json(r.w_max)}, {"corners", corners}};
}

inline json to_json(const TorusPartition& part) {
  json elements = json::array();
  for (std::size_t i = 0; i < part.size(); ++i) {
    json e = to_json(part.frame(), part.element(i));
    e["label"] = part.labels()[i];
    e["area"] = to_json(part.area(i));
    elements.push_back(std::move(e));
  }
  return {{"frame", {{"v_lambda", to_json(part.frame().first())}, {"v_mu", to_json(part.frame().second())}}},
          {"elements", elements}};
}

inline json to_json(const VerificationReport& rep) {
  json out = json::array();
  for (const auto& c : rep.checks) out.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return out;
}

inline json eigen_json(const EigenData& e) {
  return {{"lambda", to_json(e.lambda)},         {"mu", to_json(e.mu)},
          {"v_lambda", to_json(e.v_lambda)},     {"v_mu", to_json(e.v_mu)},
          {"slope_lambda", to_json(e.slope_lambda)}, {"slope_mu", to_json(e.slope_mu)},
          {"disc", e.disc},                      {"expansive_constant", to_json(e.expansive_constant)}};
}

inline json construction_json(const MarkovConstruction& mc, const VerificationReport* rep = nullptr) {
  static const char* kClass[2] = {"I", "II"};
  json corners = json::object();
  for (const auto& c : mc.corners) corners[c.name] = {{"plane", to_json(c.plane)}, {"eigen", to_json(c.eigen)}};
  json cells = json::array();
  for (std::size_t k = 0; k < mc.refined.size(); ++k) {
    json cell = to_json(mc.refined.frame(), mc.refined.element(k));
    cell["label"] = mc.refined.labels()[k];
    cell["class"] = std::string(kClass[mc.cell_class[k].first]) + "," + kClass[mc.cell_class[k].second];
    cells.push_back(std::move(cell));
  }
  json out = {{"schema", kSchemaVersion},
              {"matrix", to_json(mc.A)},
              {"C", to_json(mc.conj.C)},
              {"P", to_json(mc.conj.P)},
              {"epsilon", mc.conj.epsilon},
              {"swapped", mc.conj.swapped},
              {"conjugation_method", mc.conj.method},
              {"oriented", to_json(mc.oriented)},
              {"acting", to_json(mc.acting)},
              {"K", to_json(mc.K)},
              {"case", to_string(mc.sign_case)},
              {"eigen", eigen_json(mc.eigen)},
              {"rho", to_json(mc.rho)},
              {"corner_points", corners},
              {"base", to_json(mc.base)},
              {"cells", cells},
              {"graph_2node", to_json(mc.graph_2node)},
              {"graph_Nstar", to_json(mc.graph_nstar)}};
  if (rep) out["verifier_results"] = to_json(*rep);
  return out;
}

// ---------------------------------------------------------------------------
// DOT

inline std::string to_dot(const TransitionGraph& g, const std::string& name = "G") {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (std::size_t i = 0; i < g.size(); ++i) os << "  n" << i << " [label=\"" << g.labels()[i] << "\"];\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      for (std::int64_t e = 0; e < g.at(i, j); ++e) os << "  n" << i << " -> n" << j << ";\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

}  // namespace detail

/// The universal cover over [-1, 2]^2 in normalized coordinates: lattice grid, eigenlines
/// through lattice points, every lift of every cell, the named corner points.
inline std::string render_svg(const MarkovConstruction& mc) {
  constexpr double lo = -1.0;
  constexpr double hi = 2.0;
  constexpr double scale = 200.0;
  const double size = (hi - lo) * scale;
  auto X = [&](double x) { return detail::fmt((x - lo) * scale); };
  auto Y = [&](double y) { return detail::fmt((hi - y) * scale); };
  static const char* kFill[2] = {"#9ecae1", "#fdae6b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::fmt(size) << "\" height=\""
     << detail::fmt(size) << "\" viewBox=\"0 0 " << detail::fmt(size) << " " << detail::fmt(size) << "\">\n";
  os << "<defs><clipPath id=\"window\"><rect x=\"0\" y=\"0\" width=\"" << detail::fmt(size) << "\" height=\""
     << detail::fmt(size) << "\"/></clipPath></defs>\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << detail::fmt(size) << "\" height=\"" << detail::fmt(size)
     << "\" fill=\"white\"/>\n";
  os << "<g clip-path=\"url(#window)\">\n";

  const EigenFrame& frame = mc.refined.frame();
  const PlaneBounds window{lo, hi, lo, hi};
  for (std::size_t k = 0; k < mc.refined.size(); ++k) {
    const EigenRect& r = mc.refined.element(k);
    const auto corners = r.corners();
    for (const auto& t : candidate_translates(window, mc.refined.bounds(k))) {
      os << "<polygon fill=\"" << kFill[mc.cell_class[k].first] << "\" fill-opacity=\"0.6\" stroke=\"#333\" "
            "stroke-width=\"0.8\" points=\"";
      for (std::size_t c = 0; c < 4; ++c) {
        const auto p = frame.approx_plane(corners[c].u.to_double(), corners[c].w.to_double());
        os << (c ? " " : "") << X(p[0] + static_cast<double>(t[0])) << "," << Y(p[1] + static_cast<double>(t[1]));
      }
      os << "\"/>\n";
      if (t[0] == 0 && t[1] == 0) {
        const auto ctr = r.center();
        const auto p = frame.approx_plane(ctr.u.to_double(), ctr.w.to_double());
        os << "<text x=\"" << X(p[0]) << "\" y=\"" << Y(p[1]) << "\" font-size=\"12\" text-anchor=\"middle\">"
           << mc.refined.labels()[k] << "</text>\n";
      }
    }
  }

  for (int m = -1; m <= 2; ++m) {
    os << "<line x1=\"" << X(m) << "\" y1=\"" << Y(lo) << "\" x2=\"" << X(m) << "\" y2=\"" << Y(hi)
       << "\" stroke=\"#bbb\" stroke-width=\"0.6\"/>\n";
    os << "<line x1=\"" << X(lo) << "\" y1=\"" << Y(m) << "\" x2=\"" << X(hi) << "\" y2=\"" << Y(m)
       << "\" stroke=\"#bbb\" stroke-width=\"0.6\"/>\n";
  }
  const double sl = mc.eigen.slope_lambda.to_double();
  const double sm = mc.eigen.slope_mu.to_double();
  for (int m = -1; m <= 2; ++m) {
    for (int n = -1; n <= 2; ++n) {
      for (const auto& [slope, colour] : {std::pair{sl, "#d62728"}, std::pair{sm, "#2ca02c"}}) {
        const double x0 = m - 4.0;
        const double x1 = m + 4.0;
        os << "<line x1=\"" << X(x0) << "\" y1=\"" << Y(n + slope * (x0 - m)) << "\" x2=\"" << X(x1) << "\" y2=\""
           << Y(n + slope * (x1 - m)) << "\" stroke=\"" << colour << "\" stroke-width=\"0.5\" stroke-opacity=\"0.5\"/>\n";
      }
    }
  }
  for (const auto& c : mc.corners) {
    const double x = c.plane.x.to_double();
    const double y = c.plane.y.to_double();
    os << "<circle cx=\"" << X(x) << "\" cy=\"" << Y(y) << "\" r=\"2.5\" fill=\"black\"/>\n";
    os << "<text x=\"" << X(x) << "\" y=\"" << Y(y) << "\" dx=\"4\" dy=\"-4\" font-size=\"10\">" << c.name
       << "</text>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace markov_torus
