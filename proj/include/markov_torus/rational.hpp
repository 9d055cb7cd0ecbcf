#pragma once

// Exact rationals over arbitrary-precision integers (GMP).

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace markov_torus {

using BigInt = mpz_class;

/// Raised for operations with no defined result (division by zero, ...).
class arithmetic_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A reduced fraction numerator/denominator with denominator > 0.
class Rational {
 public:
  Rational() = default;

  template <std::signed_integral T>
  Rational(T value) : value_(static_cast<long>(value)) {}  // NOLINT(implicit)

  template <std::unsigned_integral T>
  Rational(T value) : value_(static_cast<unsigned long>(value)) {}  // NOLINT

  Rational(const BigInt& value) : value_(value) {}  // NOLINT(implicit)

  Rational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) throw arithmetic_error("rational with zero denominator");
    value_ = mpq_class(numerator, denominator);
    value_.canonicalize();
  }

  /// Parses "p", "p/q" or a finite decimal such as "-0.125".
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& t) {
      const auto b = t.find_first_not_of(" \t\n\r");
      const auto e = t.find_last_not_of(" \t\n\r");
      t = (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
    };
    trim(s);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    try {
      if (const auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        trim(num);
        trim(den);
        return Rational(BigInt(num, 10), BigInt(den, 10));
      }
      if (const auto dot = s.find('.'); dot != std::string::npos) {
        const bool negative = !s.empty() && s[0] == '-';
        std::string whole = s.substr(0, dot);
        std::string frac = s.substr(dot + 1);
        if (whole.empty() || whole == "-" || whole == "+") whole += "0";
        if (frac.empty()) frac = "0";
        if (frac.find_first_not_of("0123456789") != std::string::npos)
          throw std::invalid_argument("bad decimal literal: " + s);
        BigInt scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
        BigInt w(whole, 10);
        BigInt f(frac, 10);
        if (negative) f = -f;
        return Rational(w * scale + f, scale);
      }
      return Rational(BigInt(s, 10));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("bad rational literal: " + s);
    }
  }

  const mpq_class& raw() const { return value_; }
  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }
  int sign() const { return sgn(value_); }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }

  BigInt floor() const {
    BigInt out;
    mpz_fdiv_q(out.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return out;
  }
  BigInt ceil() const {
    BigInt out;
    mpz_cdiv_q(out.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return out;
  }
  /// x - floor(x), in [0, 1).
  Rational fractional_part() const { return *this - Rational(floor()); }

  Rational abs() const { return sign() < 0 ? -*this : *this; }
  double to_double() const { return value_.get_d(); }

  /// "p/q", or "p" when q == 1.
  std::string str() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }
  /// Always "p/q".
  std::string fraction() const {
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  Rational operator-() const {
    Rational r;
    r.value_ = -value_;
    return r;
  }
  Rational& operator+=(const Rational& o) {
    value_ += o.value_;
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    value_ -= o.value_;
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    value_ *= o.value_;
    return *this;
  }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw arithmetic_error("rational division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  mpq_class value_;
};

inline BigInt pow_big(const BigInt& base, unsigned long exponent) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

inline BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

/// Narrowing conversion that refuses to lose information.
inline std::int64_t to_int64(const BigInt& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("integer does not fit in 64 bits: " + v.get_str());
  return v.get_si();
}

}  // namespace markov_torus
