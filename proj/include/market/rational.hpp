#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace market {

// All arithmetic in the suite is exact.  Equilibrium certification hinges on
// tight equalities (zero utilities, binding loser constraints) and the
// hardness gadgets use quality values that overflow any fixed-width integer,
// so everything money- or quality-valued is an arbitrary-precision rational.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "42", "-7", "1.25", ".5", "22/7", "-3/4".  Decimal strings convert
// exactly (1.3 -> 13/10); no floating point is involved anywhere.  Throws
// ParseError on anything else (including division by zero).
Rational parse_rational(std::string_view text);

// Canonical rendering: "n" when the denominator is 1, otherwise "n/d" with
// d > 0 and gcd(n, d) = 1.  parse_rational(format_rational(r)) == r.
std::string format_rational(const Rational& value);

}  // namespace market
