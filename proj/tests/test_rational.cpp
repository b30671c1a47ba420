#include <string>
#include <vector>

#include "doctest.h"
#include "market/errors.hpp"
#include "market/rational.hpp"

using market::parse_rational;
using market::ParseError;
using market::Rational;

TEST_CASE("parse accepts integers") {
  CHECK(parse_rational("42") == Rational(42));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("0") == Rational(0));
  CHECK(parse_rational("007") == Rational(7));
}

TEST_CASE("parse converts decimal strings exactly") {
  CHECK(parse_rational("1.25") == Rational(5, 4));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("1.3") == Rational(13, 10));
  CHECK(parse_rational("-0.9") == Rational(-9, 10));
  CHECK(parse_rational("2.") == Rational(2));
}

TEST_CASE("parse accepts fraction strings") {
  CHECK(parse_rational("22/7") == Rational(22, 7));
  CHECK(parse_rational("-3/4") == Rational(-3, 4));
  CHECK(parse_rational("6/4") == Rational(3, 2));  // normalized
}

TEST_CASE("parse rejects malformed text") {
  CHECK_THROWS_AS(parse_rational(""), ParseError);
  CHECK_THROWS_AS(parse_rational("abc"), ParseError);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
  CHECK_THROWS_AS(parse_rational("--3"), ParseError);
  CHECK_THROWS_AS(parse_rational("1e5"), ParseError);
  CHECK_THROWS_AS(parse_rational("3/"), ParseError);
  CHECK_THROWS_AS(parse_rational("/4"), ParseError);
  CHECK_THROWS_AS(parse_rational("1 2"), ParseError);
}

TEST_CASE("format is canonical") {
  CHECK(market::format_rational(Rational(42)) == "42");
  CHECK(market::format_rational(Rational(-7)) == "-7");
  CHECK(market::format_rational(Rational(13, 10)) == "13/10");
  CHECK(market::format_rational(Rational(6, 4)) == "3/2");
  CHECK(market::format_rational(Rational(-6, 4)) == "-3/2");
  CHECK(market::format_rational(Rational(0)) == "0");
}

TEST_CASE("format then parse round-trips") {
  std::vector<Rational> grid;
  for (int num = -12; num <= 12; ++num)
    for (int den = 1; den <= 9; ++den) grid.emplace_back(num, den);
  grid.emplace_back(market::BigInt("123456789123456789123456789"), market::BigInt(7));
  for (const auto& r : grid) CHECK(parse_rational(market::format_rational(r)) == r);
}
