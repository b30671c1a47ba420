#include "market/market.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "market/errors.hpp"

namespace market {

Market Market::canonicalize(RawInstance raw) {
  for (std::size_t i = 0; i < raw.buyers.size(); ++i) {
    if (raw.buyers[i].value <= 0)
      throw ValidationError("buyer " + std::to_string(i) + ": value must be positive");
    if (raw.buyers[i].demand < 1)
      throw ValidationError("buyer " + std::to_string(i) + ": demand must be at least 1");
  }
  for (std::size_t j = 0; j < raw.items.size(); ++j) {
    if (raw.items[j].quality <= 0)
      throw ValidationError("item " + std::to_string(j) + ": quality must be positive");
  }

  Market m;
  std::vector<int> border(raw.buyers.size());
  std::iota(border.begin(), border.end(), 0);
  std::stable_sort(border.begin(), border.end(), [&](int a, int b) {
    return raw.buyers[a].value > raw.buyers[b].value;
  });
  std::vector<int> iorder(raw.items.size());
  std::iota(iorder.begin(), iorder.end(), 0);
  std::stable_sort(iorder.begin(), iorder.end(), [&](int a, int b) {
    return raw.items[a].quality > raw.items[b].quality;
  });

  m.buyer_rank_of_input_.resize(raw.buyers.size());
  for (std::size_t rank = 0; rank < border.size(); ++rank) {
    m.buyers_.push_back(raw.buyers[border[rank]]);
    m.buyer_input_pos_.push_back(border[rank]);
    m.buyer_rank_of_input_[border[rank]] = static_cast<int>(rank);
  }
  m.item_rank_of_input_.resize(raw.items.size());
  for (std::size_t rank = 0; rank < iorder.size(); ++rank) {
    m.items_.push_back(raw.items[iorder[rank]]);
    m.item_input_pos_.push_back(iorder[rank]);
    m.item_rank_of_input_[iorder[rank]] = static_cast<int>(rank);
  }
  return m;
}

ValueGroups value_groups(const Market& m) {
  ValueGroups g;
  g.group_of.resize(m.buyer_count());
  for (int i = 0; i < m.buyer_count(); ++i) {
    if (i == 0 || m.buyer(i).value != m.buyer(i - 1).value) g.members.emplace_back();
    g.members.back().push_back(i);
    g.group_of[i] = static_cast<int>(g.members.size()) - 1;
  }
  return g;
}

Price Price::finite(Rational amount) { return Price(false, std::move(amount)); }

const Rational& Price::amount() const {
  if (infinite_) throw OutcomeError("arithmetic on an infinite price");
  return amount_;
}

void check_outcome_shape(const Market& m, const Outcome& o) {
  if (static_cast<int>(o.prices.size()) != m.item_count())
    throw OutcomeError("price list length does not match item count");
  if (static_cast<int>(o.allocation.size()) != m.buyer_count())
    throw OutcomeError("allocation length does not match buyer count");
  std::vector<char> taken(m.item_count(), 0);
  for (int i = 0; i < m.buyer_count(); ++i) {
    const auto& bundle = o.allocation[i];
    if (!bundle.empty() && static_cast<int>(bundle.size()) != m.buyer(i).demand)
      throw OutcomeError("buyer " + std::to_string(i) + " holds a bundle of size " +
                         std::to_string(bundle.size()) + ", demand is " +
                         std::to_string(m.buyer(i).demand));
    for (std::size_t s = 0; s < bundle.size(); ++s) {
      int j = bundle[s];
      if (j < 0 || j >= m.item_count())
        throw OutcomeError("buyer " + std::to_string(i) + " holds out-of-range item");
      if (s > 0 && bundle[s - 1] >= j)
        throw OutcomeError("buyer " + std::to_string(i) + "'s bundle is not strictly ascending");
      if (taken[j])
        throw OutcomeError("item " + std::to_string(j) + " allocated twice");
      taken[j] = 1;
    }
  }
}

Rational utility(const Market& m, const Outcome& o, int buyer) {
  Rational u = 0;
  for (int j : o.allocation[buyer]) {
    if (o.prices[j].is_infinite())
      throw OutcomeError("buyer " + std::to_string(buyer) + " holds item " + std::to_string(j) +
                         " priced infinite");
    u += m.buyer(buyer).value * m.item(j).quality - o.prices[j].amount();
  }
  return u;
}

Rational revenue(const Outcome& o) {
  Rational total = 0;
  for (const auto& bundle : o.allocation)
    for (int j : bundle) {
      if (o.prices[j].is_infinite())
        throw OutcomeError("allocated item " + std::to_string(j) + " priced infinite");
      total += o.prices[j].amount();
    }
  return total;
}

int total_demand(const Market& m) {
  int d = 0;
  for (int i = 0; i < m.buyer_count(); ++i) d += m.buyer(i).demand;
  return d;
}

int total_demand(const Market& m, const std::vector<int>& buyers) {
  int d = 0;
  for (int i : buyers) d += m.buyer(i).demand;
  return d;
}

std::vector<std::vector<int>> block_allocation(const Market& m,
                                               const std::vector<int>& winners,
                                               const std::vector<int>& items) {
  if (total_demand(m, winners) > static_cast<int>(items.size()))
    throw OutcomeError("not enough items to serve every winner");
  std::vector<std::vector<int>> alloc(m.buyer_count());
  std::size_t next = 0;
  for (int i : winners)
    for (int d = 0; d < m.buyer(i).demand; ++d) alloc[i].push_back(items[next++]);
  return alloc;
}

std::vector<std::vector<int>> block_allocation(const Market& m,
                                               const std::vector<int>& winners) {
  std::vector<int> all(m.item_count());
  std::iota(all.begin(), all.end(), 0);
  return block_allocation(m, winners, all);
}

}  // namespace market
