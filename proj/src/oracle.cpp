#include "market/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "market/combinatorics.hpp"
#include "market/errors.hpp"
#include "market/lp.hpp"

namespace market {

namespace {

// Revenue program for one (winner set, allocation) pair. Variables are the
// prices of allocated items; for the equilibrium variant every bundle over
// all items competes (unallocated items cost zero), for the envy-free
// variant only allocated items are purchasable.
lp::Program pair_program(const ValuationView& view, const std::vector<int>& winners,
                         const std::vector<std::vector<int>>& bundles, bool ce,
                         const std::vector<int>& sold, const std::vector<int>& var_of) {
  const int nvars = static_cast<int>(sold.size());
  lp::Program prog;
  prog.var_count = nvars;
  prog.sense = lp::Sense::Max;
  prog.objective.assign(nvars, Rational(1));
  // envy-free prices carry no sign restriction; equilibrium prices do
  if (!ce) prog.free_vars.assign(nvars, 1);

  std::vector<int> pool;  // items a bundle may draw from
  if (ce) {
    pool.resize(view.item_count());
    for (int j = 0; j < view.item_count(); ++j) pool[j] = j;
  } else {
    pool = sold;
  }
  const int psize = static_cast<int>(pool.size());

  std::vector<char> is_winner(view.buyer_count(), 0);
  for (std::size_t k = 0; k < winners.size(); ++k) {
    const int i = winners[k];
    is_winner[i] = 1;
    const auto& mine = bundles[k];
    lp::Constraint ir;
    ir.coeffs.assign(nvars, Rational(0));
    ir.rel = lp::Rel::Le;
    ir.rhs = 0;
    for (int j : mine) {
      ir.coeffs[var_of[j]] = 1;
      ir.rhs += view.value(i, j);
    }
    prog.rows.push_back(std::move(ir));

    auto c = first_combination(view.demand(i));
    do {
      std::vector<int> alt(c.size());
      for (std::size_t x = 0; x < c.size(); ++x) alt[x] = pool[c[x]];
      if (alt == mine) continue;
      // own bundle at least as good: sum_T p - sum_B p >= sum_T v - sum_B v
      lp::Constraint row;
      row.coeffs.assign(nvars, Rational(0));
      row.rel = lp::Rel::Ge;
      row.rhs = 0;
      for (int j : alt) {
        if (var_of[j] >= 0) row.coeffs[var_of[j]] += 1;
        row.rhs += view.value(i, j);
      }
      for (int j : mine) {
        row.coeffs[var_of[j]] -= 1;
        row.rhs -= view.value(i, j);
      }
      prog.rows.push_back(std::move(row));
    } while (next_combination(c, psize));
  }

  for (int i = 0; i < view.buyer_count(); ++i) {
    if (is_winner[i] || view.demand(i) > psize) continue;
    auto c = first_combination(view.demand(i));
    do {
      // losers gain nothing: sum_T p >= sum_T v
      lp::Constraint row;
      row.coeffs.assign(nvars, Rational(0));
      row.rel = lp::Rel::Ge;
      row.rhs = 0;
      for (std::size_t x = 0; x < c.size(); ++x) {
        const int j = pool[c[x]];
        if (var_of[j] >= 0) row.coeffs[var_of[j]] += 1;
        row.rhs += view.value(i, j);
      }
      prog.rows.push_back(std::move(row));
    } while (next_combination(c, psize));
  }
  return prog;
}

// Canonical dual of a maximization with Le/Ge rows. It has one variable per
// primal row and one row per primal variable (an equality when that variable
// is free), which keeps the simplex small when rows vastly outnumber
// variables.
lp::Program dual_of(const lp::Program& p) {
  lp::Program d;
  d.var_count = static_cast<int>(p.rows.size());
  d.sense = lp::Sense::Min;
  d.objective.resize(p.rows.size());
  for (std::size_t r = 0; r < p.rows.size(); ++r)
    d.objective[r] = p.rows[r].rel == lp::Rel::Ge ? -p.rows[r].rhs : p.rows[r].rhs;
  for (int j = 0; j < p.var_count; ++j) {
    lp::Constraint row;
    row.coeffs.resize(p.rows.size());
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
      const auto& a = p.rows[r].coeffs[j];
      row.coeffs[r] = p.rows[r].rel == lp::Rel::Ge ? -a : a;
    }
    row.rel = !p.free_vars.empty() && p.free_vars[j] ? lp::Rel::Eq : lp::Rel::Ge;
    row.rhs = p.objective[j];
    d.rows.push_back(std::move(row));
  }
  return d;
}

struct BestPair {
  bool any = false;
  Rational rev;
  std::vector<int> winners;
  std::vector<std::vector<int>> bundles;
};

// Visit every allocation of bundles to `winners` in lexicographic order.
void each_allocation(const ValuationView& view, const std::vector<int>& winners,
                     std::size_t k, std::vector<int>& avail,
                     std::vector<std::vector<int>>& acc,
                     const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
  if (k == winners.size()) {
    fn(acc);
    return;
  }
  const int d = view.demand(winners[k]);
  auto c = first_combination(d);
  do {
    std::vector<int> bundle(d);
    for (int x = 0; x < d; ++x) bundle[x] = avail[c[x]];
    std::vector<int> rest;
    rest.reserve(avail.size() - d);
    {
      std::size_t ci = 0;
      for (std::size_t x = 0; x < avail.size(); ++x) {
        if (ci < c.size() && static_cast<int>(x) == c[ci]) {
          ++ci;
          continue;
        }
        rest.push_back(avail[x]);
      }
    }
    acc.push_back(std::move(bundle));
    std::swap(avail, rest);
    each_allocation(view, winners, k + 1, avail, acc, fn);
    std::swap(avail, rest);
    acc.pop_back();
  } while (next_combination(c, static_cast<int>(avail.size())));
}

Outcome empty_outcome(const ValuationView& view, bool ce) {
  Outcome out;
  out.prices.assign(view.item_count(), ce ? Price::finite(0) : Price::infinite());
  out.allocation.assign(view.buyer_count(), {});
  return out;
}

BruteCeResult run_brute(const ValuationView& view, long long budget, bool ce) {
  const int n = view.buyer_count();
  const int m = view.item_count();
  if (n > 20) throw BudgetError("too many buyers for the exhaustive reference solver");

  // price the work before doing any of it
  BigInt pairs = 1;  // the empty winner set
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    int total = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) total += view.demand(i);
    if (total > m) continue;
    BigInt ways = 1;
    int left = m;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        ways *= binomial(left, view.demand(i));
        left -= view.demand(i);
      }
    pairs += ways;
    if (pairs > budget)
      throw BudgetError("the exhaustive sweep needs " + pairs.str() +
                        "+ allocation pairs; the budget is " + std::to_string(budget));
  }

  BestPair best;
  {
    Outcome empty = empty_outcome(view, ce);
    if (!ce || is_competitive_equilibrium(view, empty)) {
      best.any = true;
      best.rev = 0;
    }
  }

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> winners;
    int total = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) {
        winners.push_back(i);
        total += view.demand(i);
      }
    if (total > m) continue;

    std::vector<int> avail(m);
    for (int j = 0; j < m; ++j) avail[j] = j;
    std::vector<std::vector<int>> acc;
    each_allocation(view, winners, 0, avail, acc,
                    [&](const std::vector<std::vector<int>>& bundles) {
                      std::vector<int> sold;
                      for (const auto& b : bundles) sold.insert(sold.end(), b.begin(), b.end());
                      std::sort(sold.begin(), sold.end());
                      std::vector<int> var_of(m, -1);
                      for (std::size_t x = 0; x < sold.size(); ++x) var_of[sold[x]] = x;
                      auto prog = pair_program(view, winners, bundles, ce, sold, var_of);
                      auto r = lp::solve(dual_of(prog));
                      if (r.status != lp::Status::Optimal) return;  // pair cannot be priced
                      if (!best.any || r.objective > best.rev) {
                        best.any = true;
                        best.rev = r.objective;
                        best.winners = winners;
                        best.bundles = bundles;
                      }
                    });
  }

  BruteCeResult res;
  res.exists = best.any;
  if (!best.any) return res;

  if (best.winners.empty()) {
    res.outcome = empty_outcome(view, ce);
    res.revenue = 0;
    return res;
  }

  std::vector<int> sold;
  for (const auto& b : best.bundles) sold.insert(sold.end(), b.begin(), b.end());
  std::sort(sold.begin(), sold.end());
  std::vector<int> var_of(m, -1);
  for (std::size_t x = 0; x < sold.size(); ++x) var_of[sold[x]] = x;
  auto prog = pair_program(view, best.winners, best.bundles, ce, sold, var_of);
  auto r = lp::solve(prog);
  if (r.status != lp::Status::Optimal)
    throw std::logic_error("pair was priceable through its dual but not directly");
  if (r.objective != best.rev)
    throw std::logic_error("strong duality violated in the reference solver");

  res.outcome.prices.assign(m, ce ? Price::finite(0) : Price::infinite());
  for (std::size_t x = 0; x < sold.size(); ++x)
    res.outcome.prices[sold[x]] = Price::finite(r.point[x]);
  res.outcome.allocation.assign(n, {});
  for (std::size_t k = 0; k < best.winners.size(); ++k)
    res.outcome.allocation[best.winners[k]] = best.bundles[k];
  res.revenue = best.rev;

  if (ce) {
    if (!is_competitive_equilibrium(view, res.outcome))
      throw std::logic_error("reference equilibrium failed its own check");
  } else {
    if (!is_envy_free(view, res.outcome))
      throw std::logic_error("reference envy-free outcome failed its own check");
  }
  return res;
}

}  // namespace

BruteEfResult brute_ef_max(const ValuationView& view, long long budget) {
  auto r = run_brute(view, budget, false);
  return BruteEfResult{std::move(r.outcome), std::move(r.revenue)};
}

BruteCeResult brute_ce(const ValuationView& view, long long budget) {
  return run_brute(view, budget, true);
}

std::optional<std::vector<int>> x3c_cover(const X3CInstance& inst) {
  validate_x3c(inst);
  const int t = static_cast<int>(inst.triples.size());
  if (inst.n == 0) return std::vector<int>{};
  if (t < inst.n) return std::nullopt;
  auto c = first_combination(inst.n);
  do {
    std::vector<char> hit(3 * inst.n, 0);
    bool ok = true;
    for (int idx : c) {
      for (int e : inst.triples[idx]) {
        if (hit[e]) {
          ok = false;
          break;
        }
        hit[e] = 1;
      }
      if (!ok) break;
    }
    if (ok) return std::vector<int>(c.begin(), c.end());
  } while (next_combination(c, t));
  return std::nullopt;
}

bool x3c_brute(const X3CInstance& inst) { return x3c_cover(inst).has_value(); }

}  // namespace market
