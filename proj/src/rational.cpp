#include "market/rational.hpp"

#include <cctype>
#include <cstddef>

#include "market/errors.hpp"

namespace market {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// Parses an optionally signed integer literal into a BigInt.
BigInt parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s))
    throw ParseError("bad rational literal: \"" + std::string(whole) + "\"");
  BigInt value{std::string(s)};
  return negative ? BigInt(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw ParseError("bad rational literal: empty string");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(s.substr(0, slash), text);
    std::string_view den_part = s.substr(slash + 1);
    if (!all_digits(den_part))
      throw ParseError("bad rational literal: \"" + std::string(text) +
                       "\" (denominator must be a plain positive integer)");
    BigInt den{std::string(den_part)};
    if (den == 0)
      throw ParseError("bad rational literal: \"" + std::string(text) + "\" (zero denominator)");
    return Rational(num, den);
  }

  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view head = s.substr(0, dot);
    std::string_view frac = s.substr(dot + 1);
    bool negative = false;
    if (!head.empty() && (head.front() == '+' || head.front() == '-')) {
      negative = head.front() == '-';
      head.remove_prefix(1);
    }
    // digits may sit on either side of the dot, but not neither
    if ((head.empty() && frac.empty()) || (!frac.empty() && !all_digits(frac)) ||
        (!head.empty() && !all_digits(head)))
      throw ParseError("bad rational literal: \"" + std::string(text) + "\"");
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt whole = head.empty() ? BigInt(0) : BigInt(std::string(head));
    BigInt num = whole * scale + (frac.empty() ? BigInt(0) : BigInt(std::string(frac)));
    if (negative) num = -num;
    return Rational(num, scale);
  }

  return Rational(parse_integer(s, text));
}

std::string format_rational(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace market
