#pragma once

#include <optional>
#include <vector>

#include "market/gadgets.hpp"
#include "market/market.hpp"
#include "market/rational.hpp"
#include "market/verify.hpp"

namespace market {

// Exhaustive reference solvers. They enumerate every winner set and every
// allocation of items to it, price each pair with a small linear program, and
// keep the first pair attaining the best revenue (winner sets by ascending
// bitmask, allocations lexicographically). `budget` caps the number of
// (winner set, allocation) pairs; exceeding it raises BudgetError.

struct BruteEfResult {
  Outcome outcome;
  Rational revenue;
};
BruteEfResult brute_ef_max(const ValuationView& view, long long budget = 1'000'000);

struct BruteCeResult {
  bool exists = false;
  Outcome outcome;
  Rational revenue;
};
BruteCeResult brute_ce(const ValuationView& view, long long budget = 1'000'000);

// Exact-cover reference: first cover found (triple combinations in
// lexicographic order), if any.
std::optional<std::vector<int>> x3c_cover(const X3CInstance& inst);
bool x3c_brute(const X3CInstance& inst);

}  // namespace market
