#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gradcoh {

// Coefficient field. mpq_class keeps every value in lowest terms with a
// positive denominator after each arithmetic operation.
using Rational = mpq_class;

// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input
// or a zero denominator.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& value);

// num/den in lowest terms. den must be nonzero.
inline Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_zero(const Rational& value) { return sgn(value) == 0; }

}  // namespace gradcoh
