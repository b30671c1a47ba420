#pragma once

// Small markets with hand-checkable optima, shared across the test suites.
// Expected revenues and price vectors quoted in the tests were worked out by
// hand and cross-checked against the exhaustive reference solvers.

#include <vector>

#include "market/gadgets.hpp"
#include "market/market.hpp"
#include "market/rational.hpp"

namespace fixtures {

using market::Buyer;
using market::Item;
using market::Market;
using market::RawInstance;
using market::Rational;
using market::X3CInstance;

// Two unit-quality items; the top buyer takes one and the 2-demand buyer
// underneath can always profitably grab the pair, so no equilibrium exists.
inline RawInstance no_ce() {
  return {{Buyer{10, 1}, Buyer{9, 2}}, {Item{1}, Item{1}}};
}

// The 2-demand top buyer fills the market exactly; best equilibrium revenue
// is 20 (e.g. prices (19,1)).
inline RawInstance exact_fill() {
  return {{Buyer{10, 2}, Buyer{1, 1}}, {Item{1}, Item{1}}};
}

// Qualities 3,2,1 with a sharp demand-2 buyer; best envy-free revenue is 75
// at prices (45,25,5), where the middle item sells above its winner's value.
inline RawInstance staircase() {
  return {{Buyer{20, 1}, Buyer{10, 2}}, {Item{3}, Item{2}, Item{1}}};
}

// Fractional values; best envy-free revenue is 31/10 at prices (11/5, 9/10)
// with the middle buyer priced out.
inline RawInstance fractional() {
  return {{Buyer{Rational(13, 10), 1}, Buyer{1, 2}, Buyer{Rational(9, 10), 1}},
          {Item{2}, Item{1}}};
}

// One prime item, one decoy, ten unit items; best envy-free revenue is 101
// with the quality-5 decoy left unsold at an infinite price.
inline RawInstance long_tail() {
  RawInstance raw;
  raw.buyers = {Buyer{10, 1}, Buyer{1, 10}};
  raw.items.push_back(Item{10});
  raw.items.push_back(Item{5});
  for (int k = 0; k < 10; ++k) raw.items.push_back(Item{1});
  return raw;
}

// The one-triple cover instance: trivially positive.
inline X3CInstance singleton_x3c() { return {1, {{{0, 1, 2}}}}; }

inline Market mk(RawInstance raw) { return Market::canonicalize(std::move(raw)); }

}  // namespace fixtures
