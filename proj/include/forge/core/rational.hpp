#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "forge/core/error.hpp"

namespace forge {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw PreconditionError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p", "-p" or "p/q".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw MalformedInput("", "empty rational");
  Rational q;
  if (q.set_str(s, 10) != 0) throw MalformedInput("", "not a rational: '" + s + "'");
  if (q.get_den() == 0) throw MalformedInput("", "zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

// Canonical text form: "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// 2^{-n}
inline Rational inverse_power_of_two(unsigned n) {
  mpz_class den = 1;
  den <<= n;
  Rational q(mpz_class(1), den);
  q.canonicalize();
  return q;
}

}  // namespace forge
