#pragma once

#include <vector>

#include "market/rational.hpp"

namespace market {

// A buyer wants *exactly* `demand` items or nothing at all, and values item j
// at value * quality_j.
struct Buyer {
  Rational value;  // per-quality willingness to pay, > 0
  int demand = 1;  // bundle size, >= 1
};

struct Item {
  Rational quality;  // > 0
};

// Input-order market description, exactly as a file or generator provided it.
struct RawInstance {
  std::vector<Buyer> buyers;
  std::vector<Item> items;
};

// A market in canonical working order: buyers sorted by non-increasing value,
// items by non-increasing quality, ties kept in input order.  Every solver in
// the suite assumes this ordering; the input-position maps let the JSON layer
// report results in the caller's original indexing.
class Market {
public:
  // Validates and sorts.  Throws ValidationError naming the offending field.
  static Market canonicalize(RawInstance raw);

  int buyer_count() const { return static_cast<int>(buyers_.size()); }
  int item_count() const { return static_cast<int>(items_.size()); }
  const Buyer& buyer(int rank) const { return buyers_[rank]; }
  const Item& item(int rank) const { return items_[rank]; }

  // Canonical rank -> position in the original input, and back.
  int buyer_input_position(int rank) const { return buyer_input_pos_[rank]; }
  int item_input_position(int rank) const { return item_input_pos_[rank]; }
  int buyer_rank_at_input(int pos) const { return buyer_rank_of_input_[pos]; }
  int item_rank_at_input(int pos) const { return item_rank_of_input_[pos]; }

private:
  std::vector<Buyer> buyers_;
  std::vector<Item> items_;
  std::vector<int> buyer_input_pos_;
  std::vector<int> item_input_pos_;
  std::vector<int> buyer_rank_of_input_;
  std::vector<int> item_rank_of_input_;
};

// Buyers partitioned into maximal runs of equal value, ordered from the
// highest value down.  Ranks inside a group stay ascending.
struct ValueGroups {
  std::vector<std::vector<int>> members;  // group -> buyer ranks
  std::vector<int> group_of;              // buyer rank -> group index
  int count() const { return static_cast<int>(members.size()); }
};

ValueGroups value_groups(const Market& m);

// An item's price: a rational (negative is legal in envy-free pricings,
// where only relative margins matter), or infinite ("not for sale").
// Infinity is an explicit state, never a sentinel number, so arithmetic on
// an infinite price is impossible by construction.
class Price {
public:
  static Price finite(Rational amount);
  static Price infinite() { return Price(true, Rational(0)); }

  bool is_infinite() const { return infinite_; }
  // Finite amount; throws OutcomeError when infinite.
  const Rational& amount() const;

  friend bool operator==(const Price& a, const Price& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.amount_ == b.amount_);
  }

private:
  Price(bool inf, Rational amount) : infinite_(inf), amount_(std::move(amount)) {}
  bool infinite_;
  Rational amount_;
};

// Prices plus an allocation.  allocation[i] is buyer i's bundle as ascending
// item ranks: either empty (buyer loses) or exactly buyer(i).demand items.
// Bundles are pairwise disjoint.
struct Outcome {
  std::vector<Price> prices;               // one per item rank
  std::vector<std::vector<int>> allocation;  // one per buyer rank
};

// Throws OutcomeError unless `o` has the right shape for `m`: matching
// lengths, sorted in-range disjoint bundles of size 0 or d_i.
void check_outcome_shape(const Market& m, const Outcome& o);

// Winner utility sum_{j in bundle}(v_i q_j - p_j); 0 for losers.  Throws
// OutcomeError if the buyer holds an item with an infinite price.
Rational utility(const Market& m, const Outcome& o, int buyer);

// Sum of prices over *allocated* items only (unsold items never earn, and in
// envy-free pricings they may be priced infinite).
Rational revenue(const Outcome& o);

int total_demand(const Market& m);
int total_demand(const Market& m, const std::vector<int>& buyers);

// Greedy block allocation: winners (ascending ranks, i.e. best value first)
// take their demand from `items` (ascending item ranks, i.e. best quality
// first) in order.  Requires enough items for every winner; leftovers stay
// unallocated.  Returns a full per-buyer bundle list in Outcome shape.
std::vector<std::vector<int>> block_allocation(const Market& m,
                                               const std::vector<int>& winners,
                                               const std::vector<int>& items);
// Same, drawing from all items.
std::vector<std::vector<int>> block_allocation(const Market& m,
                                               const std::vector<int>& winners);

}  // namespace market
