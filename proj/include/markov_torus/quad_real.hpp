#pragma once

// Exact elements rat + irr*sqrt(D) of a real quadratic field.
//
// D is carried with every value. A value whose irrational part is zero and
// whose D is 0 is a plain rational and combines with any field; otherwise
// operands must agree on D.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "markov_torus/rational.hpp"

namespace markov_torus {

/// Two quadratic values from different fields were combined.
class context_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class QuadReal {
 public:
  QuadReal() = default;

  template <std::integral T>
  QuadReal(T value) : rat_(value) {}  // NOLINT(implicit)
  QuadReal(const BigInt& value) : rat_(value) {}  // NOLINT(implicit)
  QuadReal(Rational value) : rat_(std::move(value)) {}  // NOLINT(implicit)

  /// rat + irr*sqrt(disc); disc must be a positive non-square (or 0 with irr == 0).
  QuadReal(Rational rat, Rational irr, std::int64_t disc)
      : rat_(std::move(rat)), irr_(std::move(irr)), disc_(disc) {
    if (disc_ < 0) throw std::domain_error("negative discriminant");
    if (disc_ == 0 && !irr_.is_zero()) throw std::domain_error("irrational part without discriminant");
    if (disc_ != 0) {
      const BigInt d(static_cast<long>(disc_));
      if (mpz_perfect_square_p(d.get_mpz_t()) != 0)
        throw std::domain_error("discriminant " + std::to_string(disc_) + " is a perfect square");
    }
  }

  /// The field generator sqrt(disc).
  static QuadReal root(std::int64_t disc) { return QuadReal(Rational(0), Rational(1), disc); }

  const Rational& rational_part() const { return rat_; }
  const Rational& irrational_part() const { return irr_; }
  std::int64_t disc() const { return disc_; }
  bool is_rational() const { return irr_.is_zero(); }
  bool is_zero() const { return rat_.is_zero() && irr_.is_zero(); }

  /// Exact sign, decided by comparing rat^2 with irr^2 * D.
  int sign() const {
    const int s = rat_.sign();
    const int t = irr_.sign();
    if (t == 0) return s;
    if (s == 0 || s == t) return t;
    const Rational lhs = rat_ * rat_;
    const Rational rhs = irr_ * irr_ * Rational(static_cast<long>(disc_));
    return lhs > rhs ? s : t;  // equality would make D a rational square
  }

  QuadReal abs() const { return sign() < 0 ? -*this : *this; }

  /// Floating approximation; adequate for bracketing, never for decisions.
  double to_double() const {
    if (irr_.is_zero()) return rat_.to_double();
    return rat_.to_double() + irr_.to_double() * std::sqrt(static_cast<double>(disc_));
  }

  /// Greatest integer n with n <= x.
  BigInt floor() const {
    if (irr_.is_zero()) return rat_.floor();
    const double approx = to_double();
    if (std::isfinite(approx) && std::fabs(approx) < 1e15) {
      BigInt guess(static_cast<long>(std::floor(approx)));
      for (int attempt = 0; attempt < 4; ++attempt) {
        const int lo = (*this - QuadReal(guess)).sign();
        const int hi = (*this - QuadReal(BigInt(guess + 1))).sign();
        if (lo >= 0 && hi < 0) return guess;
        guess += (lo < 0) ? -1 : 1;
      }
    }
    return floor_by_bisection();
  }

  BigInt ceil() const {
    BigInt f = floor();
    if ((*this - QuadReal(f)).is_zero()) return f;
    return f + 1;
  }

  /// "a/b + c/d*sqrt(D)"; a rational value renders as "a/b".
  std::string str() const {
    if (disc_ == 0) return rat_.fraction();
    return rat_.fraction() + " + " + irr_.fraction() + "*sqrt(" + std::to_string(disc_) + ")";
  }

  /// Correctly rounded (half-up) decimal expansion with the given number of places.
  std::string decimal(int places = 12) const {
    const BigInt scale = pow_big(BigInt(10), static_cast<unsigned long>(places));
    const QuadReal scaled = *this * QuadReal(scale) + QuadReal(Rational(BigInt(1), BigInt(2)));
    const BigInt n = scaled.floor();
    const bool negative = n < 0;
    std::string digits = abs_big(n).get_str();
    if (static_cast<int>(digits.size()) <= places)
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    std::string out = digits.substr(0, digits.size() - static_cast<std::size_t>(places));
    if (places > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(places));
    return negative ? "-" + out : out;
  }

  QuadReal operator-() const { return QuadReal(-rat_, -irr_, disc_, Unchecked{}); }

  QuadReal& operator+=(const QuadReal& o) {
    disc_ = merge(disc_, o.disc_);
    rat_ += o.rat_;
    irr_ += o.irr_;
    return *this;
  }
  QuadReal& operator-=(const QuadReal& o) {
    disc_ = merge(disc_, o.disc_);
    rat_ -= o.rat_;
    irr_ -= o.irr_;
    return *this;
  }
  QuadReal& operator*=(const QuadReal& o) {
    disc_ = merge(disc_, o.disc_);
    if (o.irr_.is_zero()) {
      rat_ *= o.rat_;
      irr_ *= o.rat_;
      return *this;
    }
    if (irr_.is_zero()) {
      irr_ = rat_ * o.irr_;
      rat_ *= o.rat_;
      return *this;
    }
    Rational r = rat_ * o.rat_ + irr_ * o.irr_ * Rational(static_cast<long>(disc_));
    Rational i = rat_ * o.irr_ + irr_ * o.rat_;
    rat_ = std::move(r);
    irr_ = std::move(i);
    return *this;
  }
  QuadReal& operator/=(const QuadReal& o) {
    if (o.is_zero()) throw arithmetic_error("quadratic division by zero");
    disc_ = merge(disc_, o.disc_);
    if (o.irr_.is_zero()) {
      rat_ /= o.rat_;
      irr_ /= o.rat_;
      return *this;
    }
    // multiply by the conjugate of the divisor
    const Rational norm = o.rat_ * o.rat_ - o.irr_ * o.irr_ * Rational(static_cast<long>(disc_));
    const QuadReal conj(o.rat_, -o.irr_, disc_, Unchecked{});
    *this *= conj;
    rat_ /= norm;
    irr_ /= norm;
    return *this;
  }

  friend QuadReal operator+(QuadReal a, const QuadReal& b) { return a += b; }
  friend QuadReal operator-(QuadReal a, const QuadReal& b) { return a -= b; }
  friend QuadReal operator*(QuadReal a, const QuadReal& b) { return a *= b; }
  friend QuadReal operator/(QuadReal a, const QuadReal& b) { return a /= b; }

  friend bool operator==(const QuadReal& a, const QuadReal& b) {
    if (a.disc_ != 0 && b.disc_ != 0 && a.disc_ != b.disc_) throw context_error("comparing values of different fields");
    return a.rat_ == b.rat_ && a.irr_ == b.irr_;
  }
  friend std::strong_ordering operator<=>(const QuadReal& a, const QuadReal& b) {
    const int s = (a - b).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  struct Unchecked {};
  QuadReal(Rational rat, Rational irr, std::int64_t disc, Unchecked)
      : rat_(std::move(rat)), irr_(std::move(irr)), disc_(disc) {}

  static std::int64_t merge(std::int64_t a, std::int64_t b) {
    if (a == 0) return b;
    if (b == 0 || a == b) return a;
    throw context_error("quadratic fields differ: sqrt(" + std::to_string(a) + ") vs sqrt(" +
                        std::to_string(b) + ")");
  }

  // |x| <= |rat| + |irr| * (ceil(sqrt(D)) + 1) brackets the answer.
  BigInt floor_by_bisection() const {
    BigInt root_ceil;
    mpz_sqrt(root_ceil.get_mpz_t(), BigInt(static_cast<long>(disc_)).get_mpz_t());
    root_ceil += 1;
    const Rational bound = rat_.abs() + irr_.abs() * Rational(BigInt(root_ceil + 1));
    BigInt lo = (-bound).floor() - 1;  // x >= lo
    BigInt hi = bound.ceil() + 1;      // x < hi
    while (hi - lo > 1) {
      BigInt mid = lo + (hi - lo) / 2;
      if ((*this - QuadReal(mid)).sign() >= 0)
        lo = mid;
      else
        hi = mid;
    }
    return lo;
  }

  Rational rat_;
  Rational irr_;
  std::int64_t disc_ = 0;
};

inline int sign(const QuadReal& x) { return x.sign(); }
inline BigInt floor_quad(const QuadReal& x) { return x.floor(); }
inline const QuadReal& min(const QuadReal& a, const QuadReal& b) { return (b < a) ? b : a; }
inline const QuadReal& max(const QuadReal& a, const QuadReal& b) { return (a < b) ? b : a; }

}  // namespace markov_torus
