#pragma once

#include <stdexcept>
#include <string>

namespace market {

// Malformed textual input: unparseable JSON, bad rational literals, wrong
// schema shapes.  The CLI maps this to exit code 1.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a domain rule (non-positive value,
// zero demand, out-of-range index, ...).  CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An enumeration was refused because its size exceeds the configured budget.
// CLI exit code 1.
class BudgetError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A solution being verified is structurally unusable: overlapping bundles,
// wrong bundle size, an allocated item carrying an infinite price.  The
// verify command maps this to exit code 3.
class OutcomeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace market
