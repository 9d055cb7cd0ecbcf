#pragma once

// Multiplication by n modulo 1 and its base-n digit coding.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "markov_torus/rational.hpp"

namespace markov_torus {

/// x -> {n x} with the partition into the open intervals (k/n, (k+1)/n).
class MultContext {
 public:
  explicit MultContext(std::int64_t base) : base_(base) {
    if (base < 2) throw std::invalid_argument("multiplication map needs base >= 2");
  }
  std::int64_t base() const { return base_; }

 private:
  std::int64_t base_;
};

inline void require_unit_interval(const Rational& x) {
  if (x.sign() < 0 || x >= Rational(1)) throw std::domain_error("point must lie in [0, 1)");
}

inline Rational mult_apply(const MultContext& ctx, const Rational& x) {
  require_unit_interval(x);
  return (Rational(ctx.base()) * x).fractional_part();
}

/// Orbit hit a/n with 0 < a < n at digit position `position` (1-based); both truncated expansions.
struct MultAmbiguity {
  std::size_t position = 0;
  std::vector<std::int64_t> upper;  // ..., a, 0, 0, ...
  std::vector<std::int64_t> lower;  // ..., a-1, n-1, n-1, ...
};

using MultEncodeResult = std::variant<std::vector<std::int64_t>, MultAmbiguity>;

/// Digits s_1..s_depth with f^{k-1}(x) in R_{s_k}. The fixed point 0 codes as all zeros.
inline MultEncodeResult mult_encode(const MultContext& ctx, const Rational& x, std::size_t depth) {
  require_unit_interval(x);
  const std::int64_t n = ctx.base();
  std::vector<std::int64_t> digits;
  Rational orbit = x;
  for (std::size_t k = 1; k <= depth; ++k) {
    const Rational scaled = Rational(n) * orbit;
    const std::int64_t digit = to_int64(scaled.floor());
    if (scaled.is_integer() && digit != 0) {
      MultAmbiguity amb;
      amb.position = k;
      amb.upper = digits;
      amb.lower = digits;
      amb.upper.push_back(digit);
      amb.lower.push_back(digit - 1);
      while (amb.upper.size() < depth) {
        amb.upper.push_back(0);
        amb.lower.push_back(n - 1);
      }
      return amb;
    }
    digits.push_back(digit);
    orbit = scaled.fractional_part();
  }
  return digits;
}

/// [value, value + width] holds every point whose expansion starts with the word.
struct MultDecodeResult {
  Rational value;  // sum of s_k / n^k
  Rational width;  // n^{-depth}
  bool contains(const Rational& x) const { return value <= x && x <= value + width; }
};

inline MultDecodeResult mult_decode(const MultContext& ctx, const std::vector<std::int64_t>& word) {
  const std::int64_t n = ctx.base();
  Rational value(0);
  Rational scale(1);
  for (auto s : word) {
    if (s < 0 || s >= n) throw std::domain_error("digit " + std::to_string(s) + " out of range");
    scale /= Rational(n);
    value += Rational(s) * scale;
  }
  return {value, scale};
}

/// Does x lie in the closure of f^{-k}(R_{s_{k+1}}) for every k, read on the circle?
///
/// This is the naive decode without the nested intersections. The closure of
/// R_s on the circle is [s/n, (s+1)/n] with 1 identified with 0.
inline bool naive_decode_contains(const MultContext& ctx, const std::vector<std::int64_t>& word, const Rational& x) {
  require_unit_interval(x);
  const std::int64_t n = ctx.base();
  Rational orbit = x;
  for (auto s : word) {
    const Rational lo = Rational(s) / Rational(n);
    const Rational hi = Rational(s + 1) / Rational(n);
    const bool inside = (lo <= orbit && orbit <= hi) || (orbit.is_zero() && s == n - 1);
    if (!inside) return false;
    orbit = mult_apply(ctx, orbit);
  }
  return true;
}

}  // namespace markov_torus
