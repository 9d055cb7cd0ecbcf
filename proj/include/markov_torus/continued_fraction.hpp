#pragma once

// Eventually periodic continued fractions of quadratic surds.

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "markov_torus/quad_real.hpp"

namespace markov_torus {

/// [preperiod..., (period...)*]. Only a_0 may be non-positive.
struct ContinuedFraction {
  std::vector<BigInt> preperiod;
  std::vector<BigInt> period;

  /// Lexicographically least rotation of the period; for comparing cycles only.
  std::vector<BigInt> canonical_period() const {
    std::vector<BigInt> best = period;
    for (std::size_t r = 1; r < period.size(); ++r) {
      std::vector<BigInt> rot(period.begin() + static_cast<std::ptrdiff_t>(r), period.end());
      rot.insert(rot.end(), period.begin(), period.begin() + static_cast<std::ptrdiff_t>(r));
      if (std::lexicographical_compare(rot.begin(), rot.end(), best.begin(), best.end())) best = rot;
    }
    return best;
  }

  /// Partial quotients of the preperiod followed by `copies` repetitions of the period.
  std::vector<BigInt> terms(std::size_t copies) const {
    std::vector<BigInt> out = preperiod;
    for (std::size_t k = 0; k < copies; ++k) out.insert(out.end(), period.begin(), period.end());
    return out;
  }

  /// Value of the finite continued fraction given by terms(copies).
  Rational convergent(std::size_t copies) const {
    const auto t = terms(copies);
    if (t.empty()) throw std::domain_error("empty continued fraction");
    Rational value(t.back());
    for (auto it = t.rbegin() + 1; it != t.rend(); ++it) value = Rational(*it) + Rational(1) / value;
    return value;
  }

  friend bool operator==(const ContinuedFraction&, const ContinuedFraction&) = default;
};

namespace detail {

// The surd (P + sqrt(N)) / Q with Q | (N - P^2); the recurrence state.
struct SurdState {
  BigInt p;
  BigInt q;
  bool operator<(const SurdState& o) const {
    if (p != o.p) return p < o.p;
    return q < o.q;
  }
};

inline BigInt surd_floor(const SurdState& s, const BigInt& root_floor) {
  // sqrt(N) lies strictly between root_floor and root_floor + 1.
  BigInt out;
  if (s.q > 0) {
    BigInt num = s.p + root_floor;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), s.q.get_mpz_t());
  } else {
    BigInt num = s.p + root_floor + 1;
    mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), s.q.get_mpz_t());
  }
  return out;
}

}  // namespace detail

/// Continued-fraction expansion of an irrational quadratic value.
///
/// The value is rewritten as (P + sqrt(N))/Q with Q | N - P^2 and the standard
/// recurrence a = floor(x), P' = aQ - P, Q' = (N - P'^2)/Q is iterated until a
/// state repeats. The first repeated state marks the start of the period, so
/// the period is minimal and the preperiod is as short as possible.
inline ContinuedFraction cf_expand(const QuadReal& x) {
  if (x.is_rational()) throw std::domain_error("cf_expand: rational input has a terminating expansion");

  // x = (A + B sqrt(D)) / C with integers, C > 0.
  const Rational& r = x.rational_part();
  const Rational& i = x.irrational_part();
  BigInt c;
  mpz_lcm(c.get_mpz_t(), r.denominator().get_mpz_t(), i.denominator().get_mpz_t());
  BigInt a = r.numerator() * (c / r.denominator());
  BigInt b = i.numerator() * (c / i.denominator());
  BigInt n = b * b * BigInt(static_cast<long>(x.disc()));
  BigInt p = b > 0 ? a : BigInt(-a);
  BigInt q = b > 0 ? c : BigInt(-c);
  // Enforce q | n - p^2 by scaling with |q|.
  {
    BigInt rem = n - p * p;
    BigInt m;
    mpz_mod(m.get_mpz_t(), rem.get_mpz_t(), abs_big(q).get_mpz_t());
    if (m != 0) {
      const BigInt aq = abs_big(q);
      p *= aq;
      n *= aq * aq;
      q *= aq;
    }
  }
  BigInt root_floor;
  mpz_sqrt(root_floor.get_mpz_t(), n.get_mpz_t());

  std::vector<BigInt> quotients;
  std::map<detail::SurdState, std::size_t> seen;
  detail::SurdState state{p, q};
  while (true) {
    if (auto it = seen.find(state); it != seen.end()) {
      ContinuedFraction out;
      out.preperiod.assign(quotients.begin(), quotients.begin() + static_cast<std::ptrdiff_t>(it->second));
      out.period.assign(quotients.begin() + static_cast<std::ptrdiff_t>(it->second), quotients.end());
      return out;
    }
    seen.emplace(state, quotients.size());
    const BigInt term = detail::surd_floor(state, root_floor);
    quotients.push_back(term);
    BigInt next_p = term * state.q - state.p;
    BigInt next_q = (n - next_p * next_p) / state.q;
    state = {std::move(next_p), std::move(next_q)};
  }
}

}  // namespace markov_torus
