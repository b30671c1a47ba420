#pragma once

#include <array>
#include <optional>
#include <vector>

#include "market/market.hpp"
#include "market/rational.hpp"
#include "market/verify.hpp"

namespace market {

// Exact cover by three-sets: ground set {0, ..., 3n-1}, a list of triples.
struct X3CInstance {
  int n = 0;
  std::vector<std::array<int, 3>> triples;
};

// Throws ValidationError on out-of-range or repeated elements within a triple.
void validate_x3c(const X3CInstance& inst);

// The pricing reduction needs n <= |triples| <= 2n - 1.
bool x3c_bounds_ok(const X3CInstance& inst);

// Answer-preserving padding that moves any valid instance with n >= 1 into
// the bounds above (adds dummy elements plus triples that must cover them).
X3CInstance pad_x3c(const X3CInstance& inst);

// Unit-demand pricing market whose best envy-free revenue hits
// `target_revenue` exactly when the source instance has an exact cover.
struct EfGadget {
  RawInstance instance;
  Rational target_revenue;
  BigInt scale;       // base used for element weights
  BigInt ground_sum;  // summed weight of the whole ground set
};
EfGadget reduce_x3c_to_ef(const X3CInstance& inst);

// General-valuation market that has a competitive equilibrium exactly when
// the source instance has an exact cover; a positive witness outcome is
// attached when the reduction can exhibit one.
struct CeGadget {
  GeneralMarket market;
  std::optional<Outcome> witness;
};
CeGadget reduce_x3c_to_ce_general(const X3CInstance& inst);

}  // namespace market
