#pragma once

// Shifts of finite type presented by non-negative integer transition matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "markov_torus/rational.hpp"

namespace markov_torus {

/// N x N non-negative integer matrix; entry (i, j) counts edges i -> j.
class TransitionGraph {
 public:
  TransitionGraph() = default;

  TransitionGraph(std::size_t size, std::vector<std::int64_t> entries, std::vector<std::string> labels = {})
      : size_(size), entries_(std::move(entries)), labels_(std::move(labels)) {
    if (size_ == 0) throw std::invalid_argument("transition graph needs at least one node");
    if (entries_.size() != size_ * size_) throw std::invalid_argument("transition graph entries must be N*N");
    bool any = false;
    for (auto e : entries_) {
      if (e < 0) throw std::invalid_argument("transition graph entries must be non-negative");
      any = any || e > 0;
    }
    if (!any) throw std::invalid_argument("transition graph has no edges");
    if (labels_.empty()) {
      for (std::size_t i = 0; i < size_; ++i) labels_.push_back(std::to_string(i));
    }
    if (labels_.size() != size_) throw std::invalid_argument("transition graph needs one label per node");
  }

  static TransitionGraph from_rows(const std::vector<std::vector<std::int64_t>>& rows,
                                   std::vector<std::string> labels = {}) {
    std::vector<std::int64_t> flat;
    for (const auto& row : rows) {
      if (row.size() != rows.size()) throw std::invalid_argument("transition matrix must be square");
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return TransitionGraph(rows.size(), std::move(flat), std::move(labels));
  }

  std::size_t size() const { return size_; }
  std::int64_t at(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }
  const std::vector<std::int64_t>& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool is_zero_one() const {
    return std::all_of(entries_.begin(), entries_.end(), [](std::int64_t e) { return e == 0 || e == 1; });
  }
  std::int64_t edge_count() const {
    std::int64_t n = 0;
    for (auto e : entries_) n += e;
    return n;
  }

  friend bool operator==(const TransitionGraph& a, const TransitionGraph& b) {
    return a.size_ == b.size_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t size_ = 0;
  std::vector<std::int64_t> entries_;
  std::vector<std::string> labels_;
};

/// The block s_m .. s_n; `offset` is m.
struct BiWord {
  std::int64_t offset = 0;
  std::vector<std::size_t> symbols;

  std::int64_t first_index() const { return offset; }
  std::int64_t last_index() const { return offset + static_cast<std::int64_t>(symbols.size()) - 1; }
  bool contains_index(std::int64_t k) const { return k >= first_index() && k <= last_index(); }
  std::size_t at_index(std::int64_t k) const { return symbols.at(static_cast<std::size_t>(k - offset)); }

  friend bool operator==(const BiWord&, const BiWord&) = default;
  friend auto operator<=>(const BiWord&, const BiWord&) = default;
};

using BigMatrix = std::vector<std::vector<BigInt>>;

namespace detail {

inline BigMatrix to_big(const TransitionGraph& g) {
  BigMatrix m(g.size(), std::vector<BigInt>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) m[i][j] = static_cast<long>(g.at(i, j));
  return m;
}

inline BigMatrix multiply(const BigMatrix& a, const BigMatrix& b) {
  const std::size_t n = a.size();
  BigMatrix out(n, std::vector<BigInt>(n, BigInt(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

inline BigMatrix identity(std::size_t n) {
  BigMatrix out(n, std::vector<BigInt>(n, BigInt(0)));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  return out;
}

}  // namespace detail

/// entries^n by repeated squaring, exact.
inline BigMatrix matrix_power(const TransitionGraph& g, std::uint64_t n) {
  BigMatrix result = detail::identity(g.size());
  BigMatrix base = detail::to_big(g);
  while (n > 0) {
    if (n & 1U) result = detail::multiply(result, base);
    n >>= 1U;
    if (n > 0) base = detail::multiply(base, base);
  }
  return result;
}

inline bool is_admissible(const TransitionGraph& g, const BiWord& w) {
  for (auto s : w.symbols)
    if (s >= g.size()) throw std::domain_error("symbol " + std::to_string(s) + " outside alphabet");
  for (std::size_t k = 0; k + 1 < w.symbols.size(); ++k)
    if (g.at(w.symbols[k], w.symbols[k + 1]) <= 0) return false;
  return true;
}

/// Number of admissible n-blocks (node-labelled convention: N for n = 1).
inline BigInt count_blocks(const TransitionGraph& g, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("count_blocks: n must be positive");
  if (n == 1) return BigInt(static_cast<unsigned long>(g.size()));
  BigInt total = 0;
  for (const auto& row : matrix_power(g, n - 1))
    for (const auto& v : row) total += v;
  return total;
}

/// Number of period-n points of the shift: trace(entries^n).
inline BigInt periodic_count(const TransitionGraph& g, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("periodic_count: n must be positive");
  const BigMatrix p = matrix_power(g, n);
  BigInt tr = 0;
  for (std::size_t i = 0; i < g.size(); ++i) tr += p[i][i];
  return tr;
}

/// All admissible n-blocks in lexicographic order.
inline std::vector<std::vector<std::size_t>> admissible_blocks(const TransitionGraph& g, std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  if (n == 0) return out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (!cur.empty() && g.at(cur.back(), s) <= 0) continue;
      cur.push_back(s);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

/// The higher block graph: nodes are admissible n-blocks, [a1..an] -> [b1..bn]
/// iff b1..b_{n-1} = a2..an and a1..an bn is admissible.
inline TransitionGraph higher_block_graph(const TransitionGraph& g, std::size_t n) {
  if (!g.is_zero_one()) throw std::invalid_argument("higher_block_graph needs a 0/1 graph; convert the multigraph first");
  if (n < 1) throw std::invalid_argument("higher_block_graph: n must be positive");
  const auto blocks = admissible_blocks(g, n);
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < blocks.size(); ++i) index.emplace(blocks[i], i);

  const bool short_labels =
      std::all_of(g.labels().begin(), g.labels().end(), [](const std::string& l) { return l.size() == 1; });
  std::vector<std::string> labels;
  for (const auto& b : blocks) {
    std::string l;
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (k > 0 && !short_labels) l += ",";
      l += g.labels()[b[k]];
    }
    labels.push_back(l);
  }

  std::vector<std::int64_t> entries(blocks.size() * blocks.size(), 0);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::vector<std::size_t> tail(blocks[i].begin() + 1, blocks[i].end());
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (g.at(blocks[i].back(), s) <= 0) continue;
      auto next = tail;
      next.push_back(s);
      entries[i * blocks.size() + index.at(next)] = 1;
    }
  }
  return TransitionGraph(blocks.size(), std::move(entries), std::move(labels));
}

/// Strong connectivity over positive entries.
inline bool is_irreducible(const TransitionGraph& g) {
  const std::size_t n = g.size();
  auto reach_all = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u = 0; u < n; ++u) {
        const bool edge = forward ? g.at(v, u) > 0 : g.at(u, v) > 0;
        if (edge && !seen[u]) {
          seen[u] = true;
          stack.push_back(u);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach_all(true) && reach_all(false);
}

struct PrunedGraph {
  TransitionGraph graph;
  std::vector<std::size_t> kept;  // original indices of surviving nodes
};

/// Keeps the recurrent nodes: those in a strongly connected class that has a cycle and no edge leaving it.
///
/// A node that can leave its class never returns, so it is transient even when it carries a loop.
inline PrunedGraph prune_transient(const TransitionGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = g.at(i, j) > 0;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  std::vector<bool> alive(n, false);
  for (std::size_t v = 0; v < n; ++v) {
    if (!reach[v][v]) continue;
    bool closed = true;
    for (std::size_t u = 0; u < n && closed; ++u)
      if (reach[v][u] && !reach[u][v]) closed = false;
    alive[v] = closed;
  }
  std::vector<std::size_t> kept;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (alive[v]) kept.push_back(v);
  if (kept.empty()) throw std::domain_error("prune_transient: every node is transient");
  std::vector<std::int64_t> entries;
  std::vector<std::string> labels;
  for (auto i : kept) {
    labels.push_back(g.labels()[i]);
    for (auto j : kept) entries.push_back(g.at(i, j));
  }
  return {TransitionGraph(kept.size(), std::move(entries), std::move(labels)), std::move(kept)};
}

struct PerronData {
  /// Characteristic polynomial det(xI - A), highest degree first (leading 1).
  std::vector<BigInt> char_poly;
  double spectral_radius = 0.0;
};

/// Exact characteristic polynomial by the Faddeev-LeVerrier recursion.
inline std::vector<BigInt> characteristic_polynomial(const TransitionGraph& g) {
  const std::size_t n = g.size();
  using QMatrix = std::vector<std::vector<Rational>>;
  QMatrix a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = Rational(g.at(i, j));

  std::vector<Rational> coeffs{Rational(1)};
  QMatrix m(n, std::vector<Rational>(n, Rational(0)));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I
    QMatrix next(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (a[i][l].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += a[i][l] * m[l][j];
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += coeffs.back();
    // c_k = -tr(A M_k) / k
    Rational tr(0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * next[l][i];
    coeffs.push_back(-tr / Rational(static_cast<long>(k)));
    m = std::move(next);
  }
  std::vector<BigInt> out;
  for (const auto& c : coeffs) {
    if (!c.is_integer()) throw std::logic_error("characteristic polynomial coefficient is not an integer");
    out.push_back(c.numerator());
  }
  return out;
}

/// Characteristic polynomial and a numerical spectral radius.
///
/// For N = 2 the radius comes from the quadratic formula; otherwise from the
/// dense eigen-solver, polished with Newton steps on the exact polynomial.
inline PerronData perron_data(const TransitionGraph& g) {
  PerronData out;
  out.char_poly = characteristic_polynomial(g);
  const std::size_t n = g.size();
  if (n == 1) {
    out.spectral_radius = static_cast<double>(g.at(0, 0));
    return out;
  }
  if (n == 2) {
    const long double t = static_cast<long double>(g.at(0, 0) + g.at(1, 1));
    const long double d =
        static_cast<long double>(g.at(0, 0)) * g.at(1, 1) - static_cast<long double>(g.at(0, 1)) * g.at(1, 0);
    const long double disc = t * t - 4 * d;
    if (disc >= 0) {
      const long double r = std::sqrt(disc);
      out.spectral_radius = static_cast<double>(std::max(std::fabs((t + r) / 2), std::fabs((t - r) / 2)));
    } else {
      out.spectral_radius = static_cast<double>(std::sqrt(std::fabs(d)));
    }
    return out;
  }
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
        static_cast<double>(g.at(i, j));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  std::complex<double> best(0.0, 0.0);
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const auto ev = solver.eigenvalues()[k];
    if (std::abs(ev) > std::abs(best) + 1e-12 ||
        (std::abs(std::abs(ev) - std::abs(best)) <= 1e-12 && ev.real() > best.real()))
      best = ev;
  }
  // A non-negative matrix has its spectral radius as an eigenvalue; polish it.
  if (std::fabs(best.imag()) < 1e-9 && best.real() > 0) {
    long double x = best.real();
    for (int it = 0; it < 8; ++it) {
      long double p = 0;
      long double dp = 0;
      for (const auto& c : out.char_poly) {
        dp = dp * x + p;
        p = p * x + static_cast<long double>(c.get_d());
      }
      if (dp == 0) break;
      x -= p / dp;
    }
    out.spectral_radius = static_cast<double>(x);
  } else {
    out.spectral_radius = std::abs(best);
  }
  return out;
}

}  // namespace markov_torus
