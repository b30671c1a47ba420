#include "market/verify.hpp"

#include <algorithm>
#include <string>

#include "market/errors.hpp"

namespace market {

ValuationView ValuationView::correlated(const Market& m) {
  ValuationView v;
  v.market_ = &m;
  return v;
}

ValuationView ValuationView::general(const GeneralMarket& g) {
  if (g.valuations.size() != g.demands.size())
    throw ValidationError("general market: one valuation row per buyer required");
  for (std::size_t i = 0; i < g.valuations.size(); ++i) {
    if (g.valuations[i].size() != (g.valuations.empty() ? 0 : g.valuations[0].size()))
      throw ValidationError("general market: ragged valuation matrix");
    if (g.demands[i] < 1)
      throw ValidationError("buyer " + std::to_string(i) + ": demand must be at least 1");
    for (const Rational& x : g.valuations[i])
      if (x < 0) throw ValidationError("general market: valuations must be non-negative");
  }
  ValuationView v;
  v.general_ = &g;
  return v;
}

int ValuationView::buyer_count() const {
  return market_ ? market_->buyer_count() : static_cast<int>(general_->demands.size());
}

int ValuationView::item_count() const {
  if (market_) return market_->item_count();
  return general_->valuations.empty() ? 0 : static_cast<int>(general_->valuations[0].size());
}

int ValuationView::demand(int buyer) const {
  return market_ ? market_->buyer(buyer).demand : general_->demands[buyer];
}

Rational ValuationView::value(int buyer, int item) const {
  if (market_) return market_->buyer(buyer).value * market_->item(item).quality;
  return general_->valuations[buyer][item];
}

void ValuationView::check_outcome_shape(const Outcome& o) const {
  if (static_cast<int>(o.prices.size()) != item_count())
    throw OutcomeError("price list length does not match item count");
  if (static_cast<int>(o.allocation.size()) != buyer_count())
    throw OutcomeError("allocation length does not match buyer count");
  std::vector<char> taken(item_count(), 0);
  for (int i = 0; i < buyer_count(); ++i) {
    const auto& bundle = o.allocation[i];
    if (!bundle.empty() && static_cast<int>(bundle.size()) != demand(i))
      throw OutcomeError("buyer " + std::to_string(i) + " holds a bundle of size " +
                         std::to_string(bundle.size()) + ", demand is " +
                         std::to_string(demand(i)));
    for (std::size_t s = 0; s < bundle.size(); ++s) {
      int j = bundle[s];
      if (j < 0 || j >= item_count())
        throw OutcomeError("buyer " + std::to_string(i) + " holds out-of-range item");
      if (s > 0 && bundle[s - 1] >= j)
        throw OutcomeError("buyer " + std::to_string(i) + "'s bundle is not strictly ascending");
      if (taken[j]) throw OutcomeError("item " + std::to_string(j) + " allocated twice");
      taken[j] = 1;
    }
  }
}

Rational ValuationView::buyer_utility(const Outcome& o, int buyer) const {
  Rational u = 0;
  for (int j : o.allocation[buyer]) {
    if (o.prices[j].is_infinite())
      throw OutcomeError("buyer " + std::to_string(buyer) + " holds item " + std::to_string(j) +
                         " priced infinite");
    u += value(buyer, j) - o.prices[j].amount();
  }
  return u;
}

std::optional<BestResponse> best_response(const ValuationView& v, int buyer,
                                          const std::vector<Price>& prices, int size) {
  if (size < 1) throw ValidationError("best response bundle size must be at least 1");
  struct Entry {
    Rational margin;
    int item;
  };
  std::vector<Entry> entries;
  for (int j = 0; j < v.item_count(); ++j) {
    if (prices[j].is_infinite()) continue;
    entries.push_back({v.value(buyer, j) - prices[j].amount(), j});
  }
  if (static_cast<int>(entries.size()) < size) return std::nullopt;
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.margin != b.margin) return a.margin > b.margin;
    return a.item < b.item;
  });
  BestResponse best;
  for (int s = 0; s < size; ++s) {
    best.items.push_back(entries[s].item);
    best.margin += entries[s].margin;
  }
  std::sort(best.items.begin(), best.items.end());
  return best;
}

std::optional<EnvyWitness> buyer_envy(const ValuationView& v, const Outcome& o, int buyer) {
  const int d = v.demand(buyer);
  auto br = best_response(v, buyer, o.prices, d);
  if (o.allocation[buyer].empty()) {
    // Losers have utility 0 and must see no strictly profitable bundle.
    if (!br || br->margin <= 0) return std::nullopt;
    return EnvyWitness{buyer, br->items, br->margin};
  }
  Rational u = v.buyer_utility(o, buyer);
  // The winner's own bundle is finite-priced, so a best response exists and
  // its margin is at least u.
  if (br->margin > u) return EnvyWitness{buyer, br->items, br->margin - u};
  if (u < 0) return EnvyWitness{buyer, {}, -u};  // would rather sit out
  return std::nullopt;
}

std::optional<EnvyWitness> find_envy(const ValuationView& v, const Outcome& o) {
  v.check_outcome_shape(o);
  for (int i = 0; i < v.buyer_count(); ++i)
    if (auto w = buyer_envy(v, o, i)) return w;
  return std::nullopt;
}

bool is_envy_free(const ValuationView& v, const Outcome& o) { return !find_envy(v, o); }

bool winner_swap_free(const ValuationView& v, const Outcome& o, int buyer) {
  const auto& bundle = o.allocation[buyer];
  if (bundle.empty()) throw ValidationError("winner_swap_free: buyer is not a winner");
  if (v.buyer_utility(o, buyer) < 0) return false;
  std::vector<char> mine(v.item_count(), 0);
  for (int j : bundle) mine[j] = 1;
  for (int j : bundle) {
    Rational keep = v.value(buyer, j) - o.prices[j].amount();
    for (int k = 0; k < v.item_count(); ++k) {
      if (mine[k] || o.prices[k].is_infinite()) continue;
      if (v.value(buyer, k) - o.prices[k].amount() > keep) return false;
    }
  }
  return true;
}

std::optional<CeViolation> find_ce_violation(const ValuationView& v, const Outcome& o) {
  v.check_outcome_shape(o);
  std::vector<char> sold(v.item_count(), 0);
  for (const auto& bundle : o.allocation)
    for (int j : bundle) sold[j] = 1;
  for (int j = 0; j < v.item_count(); ++j) {
    if (o.prices[j].is_infinite())
      return CeViolation{CeViolation::Kind::InfinitePrice, j, std::nullopt};
  }
  for (int j = 0; j < v.item_count(); ++j) {
    if (!sold[j] && o.prices[j].amount() != 0)
      return CeViolation{CeViolation::Kind::UnsoldNonzeroPrice, j, std::nullopt};
  }
  if (auto w = find_envy(v, o))
    return CeViolation{CeViolation::Kind::Envy, -1, std::move(w)};
  return std::nullopt;
}

bool is_competitive_equilibrium(const ValuationView& v, const Outcome& o) {
  return !find_ce_violation(v, o);
}

std::vector<std::pair<int, int>> over_priced_items(const Market& m, const Outcome& o) {
  check_outcome_shape(m, o);
  std::vector<std::pair<int, int>> result;
  for (int i = 0; i < m.buyer_count(); ++i) {
    for (int j : o.allocation[i]) {
      if (o.prices[j].is_infinite())
        throw OutcomeError("allocated item " + std::to_string(j) + " priced infinite");
      if (o.prices[j].amount() > m.buyer(i).value * m.item(j).quality) result.push_back({j, i});
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace market
