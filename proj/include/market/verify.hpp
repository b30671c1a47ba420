#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "market/market.hpp"

namespace market {

// A market given by an explicit valuation matrix instead of value * quality.
// Used by the hardness gadget for equilibrium existence; kept in input order
// (there is no quality axis to sort by).
struct GeneralMarket {
  std::vector<std::vector<Rational>> valuations;  // [buyer][item]
  std::vector<int> demands;
};

// Uniform read surface for both market kinds so certification code is written
// once.  Holds a pointer to the underlying market; the caller keeps it alive.
class ValuationView {
public:
  static ValuationView correlated(const Market& m);
  static ValuationView general(const GeneralMarket& g);
  // the view only borrows; forbid binding it to a temporary market
  static ValuationView correlated(Market&&) = delete;
  static ValuationView general(GeneralMarket&&) = delete;

  int buyer_count() const;
  int item_count() const;
  int demand(int buyer) const;
  Rational value(int buyer, int item) const;  // v_ij

  // Non-null only for correlated views.
  const Market* correlated_market() const { return market_; }

  void check_outcome_shape(const Outcome& o) const;
  Rational buyer_utility(const Outcome& o, int buyer) const;

private:
  const Market* market_ = nullptr;
  const GeneralMarket* general_ = nullptr;
};

// The best bundle of exactly `size` finite-priced items for `buyer`: its
// items (ascending ranks) and total margin sum(v_ij - p_j).  Deterministic
// tie-break: higher margin first, then lower item rank, which yields the
// lexicographically least maximizing bundle.  Empty when fewer than `size`
// items are finitely priced.
struct BestResponse {
  std::vector<int> items;
  Rational margin;
};
std::optional<BestResponse> best_response(const ValuationView& v, int buyer,
                                          const std::vector<Price>& prices, int size);

// Proof that a buyer is not envy-free.  For a winner, `envied` is a bundle of
// size d_i with margin exceeding the buyer's utility by `gain` > 0; an empty
// `envied` means the winner's own utility is negative (they envy sitting
// out).  For a loser (utility 0), `envied` is a bundle with positive margin.
// Invariant either way: sum_{j in envied}(v_ij - p_j) - u_i = gain > 0.
struct EnvyWitness {
  int buyer = -1;
  std::vector<int> envied;
  Rational gain;
};

// std::nullopt == the buyer is envy-free.
std::optional<EnvyWitness> buyer_envy(const ValuationView& v, const Outcome& o, int buyer);
// First (lowest-rank) violated buyer, or nullopt when everyone is envy-free.
std::optional<EnvyWitness> find_envy(const ValuationView& v, const Outcome& o);
bool is_envy_free(const ValuationView& v, const Outcome& o);

// Pairwise formulation of the winner check (swap-freeness plus non-negative
// utility).  Agrees with buyer_envy on winners; exposed so tests can assert
// the equivalence.
bool winner_swap_free(const ValuationView& v, const Outcome& o, int buyer);

// Why an outcome fails to be a competitive equilibrium.
struct CeViolation {
  enum class Kind {
    InfinitePrice,       // equilibria price every item finitely
    UnsoldNonzeroPrice,  // market clearance: unsold => price 0
    Envy,
  };
  Kind kind;
  int item = -1;  // offending item for the price kinds
  std::optional<EnvyWitness> envy;
};

std::optional<CeViolation> find_ce_violation(const ValuationView& v, const Outcome& o);
bool is_competitive_equilibrium(const ValuationView& v, const Outcome& o);

// (item, winner) pairs where the winner pays more than their own valuation:
// p_j > v_i q_j.  Ascending item rank.  Correlated markets only.
std::vector<std::pair<int, int>> over_priced_items(const Market& m, const Outcome& o);

}  // namespace market
