#ifndef ECW_RATIONAL_HPP
#define ECW_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace ecw {

/// Arbitrary-precision rational, always kept in lowest terms.
using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical "p/q" text: lowest terms, positive denominator, integers without "/1".
std::string to_string(const Rational& value);

/// Parses "p/q" or "p". Throws std::invalid_argument on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

/// Shortest round-trip decimal form of a double, independent of the C locale.
std::string format_double(double value);

inline Rational make_rational(long num, long den = 1) {
  Rational r{Integer(num), Integer(den)};
  r.canonicalize();
  return r;
}

Rational pow(const Rational& base, unsigned exponent);

}  // namespace ecw

#endif  // ECW_RATIONAL_HPP
