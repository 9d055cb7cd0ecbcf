#pragma once

// The 2-torus R^2 / Z^2 and its automorphisms given by matrices in GL(2, Z).
//
// Points are row vectors and a matrix acts on the right:
//   (x, y) [[a, b], [c, d]] = (a x + c y, b x + d y).

#include <array>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "markov_torus/quad_real.hpp"

namespace markov_torus {

/// Integer 2x2 matrix [[a, b], [c, d]].
struct Mat2Z {
  BigInt a = 1;
  BigInt b = 0;
  BigInt c = 0;
  BigInt d = 1;

  Mat2Z() = default;
  Mat2Z(BigInt a_, BigInt b_, BigInt c_, BigInt d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}
  Mat2Z(long a_, long b_, long c_, long d_) : a(a_), b(b_), c(c_), d(d_) {}

  static Mat2Z identity() { return {1L, 0L, 0L, 1L}; }
  /// The coordinate swap [[0, 1], [1, 0]].
  static Mat2Z swap() { return {0L, 1L, 1L, 0L}; }

  BigInt det() const { return a * d - b * c; }
  BigInt trace() const { return a + d; }
  bool is_unimodular() const {
    const BigInt dt = det();
    return dt == 1 || dt == -1;
  }
  bool is_nonnegative() const { return a >= 0 && b >= 0 && c >= 0 && d >= 0; }

  /// Inverse of a unimodular matrix (adjugate times det).
  Mat2Z inverse() const {
    const BigInt dt = det();
    if (dt != 1 && dt != -1) throw std::domain_error("inverse: matrix is not unimodular");
    return {BigInt(d * dt), BigInt(-b * dt), BigInt(-c * dt), BigInt(a * dt)};
  }

  Mat2Z operator-() const { return {BigInt(-a), BigInt(-b), BigInt(-c), BigInt(-d)}; }

  friend Mat2Z operator*(const Mat2Z& x, const Mat2Z& y) {
    return {BigInt(x.a * y.a + x.b * y.c), BigInt(x.a * y.b + x.b * y.d), BigInt(x.c * y.a + x.d * y.c),
            BigInt(x.c * y.b + x.d * y.d)};
  }
  friend Mat2Z operator-(const Mat2Z& x, const Mat2Z& y) {
    return {BigInt(x.a - y.a), BigInt(x.b - y.b), BigInt(x.c - y.c), BigInt(x.d - y.d)};
  }
  friend bool operator==(const Mat2Z&, const Mat2Z&) = default;

  Mat2Z pow(std::uint64_t n) const {
    Mat2Z result = identity();
    Mat2Z base = *this;
    while (n > 0) {
      if (n & 1U) result = result * base;
      n >>= 1U;
      if (n > 0) base = base * base;
    }
    return result;
  }

  std::string str() const {
    std::ostringstream os;
    os << "[[" << a.get_str() << "," << b.get_str() << "],[" << c.get_str() << "," << d.get_str() << "]]";
    return os.str();
  }
};

/// A point of the universal cover R^2.
struct PlanePoint {
  QuadReal x;
  QuadReal y;

  friend PlanePoint operator+(const PlanePoint& p, const PlanePoint& q) { return {p.x + q.x, p.y + q.y}; }
  friend PlanePoint operator-(const PlanePoint& p, const PlanePoint& q) { return {p.x - q.x, p.y - q.y}; }
  friend PlanePoint operator*(const QuadReal& s, const PlanePoint& p) { return {s * p.x, s * p.y}; }
  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

inline QuadReal cross(const PlanePoint& p, const PlanePoint& q) { return p.x * q.y - p.y * q.x; }
inline QuadReal dot(const PlanePoint& p, const PlanePoint& q) { return p.x * q.x + p.y * q.y; }

/// p * m (row vector on the left).
inline PlanePoint multiply(const PlanePoint& p, const Mat2Z& m) {
  return {p.x * QuadReal(m.a) + p.y * QuadReal(m.c), p.x * QuadReal(m.b) + p.y * QuadReal(m.d)};
}

/// The torus map given by m; with `reduce` both coordinates land in [0, 1).
inline PlanePoint apply_auto(const Mat2Z& m, const PlanePoint& p, bool reduce) {
  PlanePoint q = multiply(p, m);
  if (reduce) {
    q.x -= QuadReal(q.x.floor());
    q.y -= QuadReal(q.y.floor());
  }
  return q;
}

inline PlanePoint reduce_mod_one(const PlanePoint& p) {
  return {p.x - QuadReal(p.x.floor()), p.y - QuadReal(p.y.floor())};
}

/// Raised for matrices that do not define a hyperbolic automorphism.
class not_hyperbolic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Eigen-data of a hyperbolic matrix; lambda is the expanding eigenvalue.
struct EigenData {
  QuadReal lambda;
  QuadReal mu;
  PlanePoint v_lambda;
  PlanePoint v_mu;
  QuadReal slope_lambda;
  QuadReal slope_mu;
  std::int64_t disc = 0;
  QuadReal expansive_constant;  // |mu| / 8
};

/// Checks unimodularity and hyperbolicity and returns exact eigen-data.
///
/// det = +1 is hyperbolic iff |trace| >= 3, det = -1 iff trace != 0. For those
/// matrices D = trace^2 - 4 det is a positive non-square and c != 0.
inline EigenData hyperbolic_check(const Mat2Z& m) {
  const BigInt det = m.det();
  if (det != 1 && det != -1) throw std::domain_error("matrix " + m.str() + " has determinant " + det.get_str() + ", not +-1");
  const BigInt t = m.trace();
  if (det == 1 && abs_big(t) < 3) {
    if (abs_big(t) == 2) throw not_hyperbolic("matrix " + m.str() + " has the repeated rational eigenvalue " + BigInt(t / 2).get_str());
    throw not_hyperbolic("matrix " + m.str() + " has complex eigenvalues of modulus one");
  }
  if (det == -1 && t == 0) throw not_hyperbolic("matrix " + m.str() + " has the rational eigenvalues 1 and -1");

  const BigInt dbig = t * t - 4 * det;
  const std::int64_t disc = to_int64(dbig);
  const Rational half(BigInt(1), BigInt(2));
  const QuadReal root = QuadReal(Rational(0), half, disc);  // sqrt(D)/2
  const QuadReal t_half = QuadReal(Rational(t) * half);
  EigenData e;
  e.disc = disc;
  e.lambda = (t > 0) ? t_half + root : t_half - root;
  e.mu = QuadReal(t) - e.lambda;
  const QuadReal a(m.a);
  const QuadReal c(m.c);
  e.v_lambda = {c, e.lambda - a};
  e.v_mu = {c, e.mu - a};
  e.slope_lambda = (e.lambda - a) / c;
  e.slope_mu = (e.mu - a) / c;
  e.expansive_constant = e.mu.abs() / QuadReal(8);
  return e;
}

/// Coordinates (u, w) with p = u * first + w * second for a frame basis.
struct EigenCoord {
  QuadReal u;
  QuadReal w;
  friend bool operator==(const EigenCoord&, const EigenCoord&) = default;
};

/// A basis of the plane (normally v_lambda, v_mu) with both changes of coordinates.
class EigenFrame {
 public:
  EigenFrame() = default;

  static EigenFrame from_basis(PlanePoint first, PlanePoint second) {
    EigenFrame f;
    f.first_ = std::move(first);
    f.second_ = std::move(second);
    f.det_ = cross(f.first_, f.second_);
    if (f.det_.is_zero()) throw std::domain_error("frame basis vectors are parallel");
    // Inverse of the matrix whose rows are first and second.
    f.inv_ = {f.second_.y / f.det_, -f.first_.y / f.det_, -f.second_.x / f.det_, f.first_.x / f.det_};
    f.approx_ = {f.first_.x.to_double(), f.first_.y.to_double(), f.second_.x.to_double(), f.second_.y.to_double()};
    f.e1_ = f.to_eigen({QuadReal(1), QuadReal(0)});
    f.e2_ = f.to_eigen({QuadReal(0), QuadReal(1)});
    return f;
  }

  static EigenFrame from_eigen_data(const EigenData& e) { return from_basis(e.v_lambda, e.v_mu); }

  const PlanePoint& first() const { return first_; }
  const PlanePoint& second() const { return second_; }
  const QuadReal& determinant() const { return det_; }

  EigenCoord to_eigen(const PlanePoint& p) const {
    return {p.x * inv_[0] + p.y * inv_[2], p.x * inv_[1] + p.y * inv_[3]};
  }
  PlanePoint from_eigen(const EigenCoord& c) const {
    return {c.u * first_.x + c.w * second_.x, c.u * first_.y + c.w * second_.y};
  }

  /// Floating plane position of u * first + w * second; for enumeration bounds only.
  std::array<double, 2> approx_plane(double u, double w) const {
    return {u * approx_[0] + w * approx_[2], u * approx_[1] + w * approx_[3]};
  }

  /// Eigen-coordinates of the lattice vector (m, n).
  EigenCoord lattice(const BigInt& m, const BigInt& n) const {
    const QuadReal qm(m);
    const QuadReal qn(n);
    return {qm * e1_.u + qn * e2_.u, qm * e1_.w + qn * e2_.w};
  }
  EigenCoord lattice(long m, long n) const { return lattice(BigInt(m), BigInt(n)); }

 private:
  PlanePoint first_;
  PlanePoint second_;
  QuadReal det_;
  std::array<QuadReal, 4> inv_;
  std::array<double, 4> approx_{};
  EigenCoord e1_;
  EigenCoord e2_;
};

inline EigenCoord to_eigen(const EigenFrame& frame, const PlanePoint& p) { return frame.to_eigen(p); }
inline PlanePoint from_eigen(const EigenFrame& frame, const EigenCoord& c) { return frame.from_eigen(c); }

/// The action of a matrix that preserves both frame directions: (u, w) -> (lambda u, mu w).
struct DiagonalAction {
  QuadReal lambda;
  QuadReal mu;
};

namespace detail {
inline std::optional<QuadReal> eigen_factor(const PlanePoint& v, const Mat2Z& m) {
  const PlanePoint image = multiply(v, m);
  if (!cross(v, image).is_zero()) return std::nullopt;
  if (!v.x.is_zero()) return image.x / v.x;
  return image.y / v.y;
}
}  // namespace detail

/// The diagonal action of m in the frame, or nullopt when m does not preserve both directions.
inline std::optional<DiagonalAction> try_action_in_frame(const EigenFrame& frame, const Mat2Z& m) {
  auto l = detail::eigen_factor(frame.first(), m);
  auto u = detail::eigen_factor(frame.second(), m);
  if (!l || !u) return std::nullopt;
  return DiagonalAction{*l, *u};
}

inline DiagonalAction action_in_frame(const EigenFrame& frame, const Mat2Z& m) {
  auto act = try_action_in_frame(frame, m);
  if (!act) throw std::domain_error("matrix " + m.str() + " does not preserve the frame directions");
  return *act;
}

/// |det(m^n - I)|: the number of points of the torus fixed by the n-th iterate.
inline BigInt count_periodic_points(const Mat2Z& m, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("count_periodic_points: n must be positive");
  const BigInt count = abs_big((m.pow(n) - Mat2Z::identity()).det());
  if (count == 0) throw std::domain_error("iterate has eigenvalue 1; fixed set is not finite");
  return count;
}

}  // namespace markov_torus
