#include "market/ce_solver.hpp"

#include <ostream>
#include <stdexcept>
#include <utility>

#include "market/errors.hpp"
#include "market/lp.hpp"
#include "market/verify.hpp"

namespace market {

namespace {

const char* action_name(SelectionStep::Action a) {
  switch (a) {
    case SelectionStep::Action::Take: return "take";
    case SelectionStep::Action::Skip: return "skip";
    case SelectionStep::Action::FillExact: return "fill-exact";
  }
  return "?";
}

std::string input_positions(const Market& m, const std::vector<int>& ranks) {
  std::string out = "[";
  for (std::size_t s = 0; s < ranks.size(); ++s) {
    if (s) out += ",";
    out += std::to_string(m.buyer_input_position(ranks[s]));
  }
  return out + "]";
}

void emit_selection_trace(std::ostream* trace, const Market& m, const CandidateWinners& cw) {
  if (!trace) return;
  for (const auto& st : cw.steps)
    *trace << "{\"phase\":\"select\",\"group\":" << st.group << ",\"action\":\""
           << action_name(st.action) << "\",\"buyers\":" << input_positions(m, st.taken)
           << ",\"capacity\":" << st.capacity_after << "}\n";
  if (!cw.found)
    *trace << "{\"phase\":\"select\",\"group\":" << cw.failed_group
           << ",\"action\":\"no-exact-fill\"}\n";
}

}  // namespace

std::optional<std::vector<int>> exact_fill(const Market& m, const std::vector<int>& pool,
                                           int target) {
  if (target < 0) return std::nullopt;
  const int n = static_cast<int>(pool.size());
  // reachable[i][t]: some subset of pool[i..] has total demand t
  std::vector<std::vector<char>> reachable(n + 1, std::vector<char>(target + 1, 0));
  reachable[n][0] = 1;
  for (int i = n - 1; i >= 0; --i) {
    const int d = m.buyer(pool[i]).demand;
    for (int t = 0; t <= target; ++t)
      reachable[i][t] = reachable[i + 1][t] || (t >= d && reachable[i + 1][t - d]);
  }
  if (!reachable[0][target]) return std::nullopt;
  // taking the earliest buyer whenever the rest still works out gives the
  // lexicographically least subset
  std::vector<int> chosen;
  int t = target;
  for (int i = 0; i < n && t > 0; ++i) {
    const int d = m.buyer(pool[i]).demand;
    if (t >= d && reachable[i + 1][t - d]) {
      chosen.push_back(pool[i]);
      t -= d;
    }
  }
  return chosen;
}

CandidateWinners ce_stage1(const Market& m) {
  CandidateWinners cw;
  const auto groups = value_groups(m);
  int capacity = m.item_count();
  for (int k = 0; k < groups.count(); ++k) {
    std::vector<int> fitting;
    int group_demand = 0;
    for (int i : groups.members[k]) {
      if (m.buyer(i).demand <= capacity) {
        fitting.push_back(i);
        group_demand += m.buyer(i).demand;
      }
    }
    if (fitting.empty()) {
      cw.steps.push_back({k, SelectionStep::Action::Skip, {}, capacity});
      continue;
    }
    if (group_demand > capacity) {
      // the group overflows: it must fill the remaining capacity exactly,
      // otherwise some member of it would be left envious
      auto fill = exact_fill(m, fitting, capacity);
      if (!fill) {
        cw.found = false;
        cw.failed_group = k;
        return cw;
      }
      cw.winners.insert(cw.winners.end(), fill->begin(), fill->end());
      cw.steps.push_back({k, SelectionStep::Action::FillExact, *fill, 0});
      return cw;  // capacity exhausted; lower groups stay out
    }
    cw.winners.insert(cw.winners.end(), fitting.begin(), fitting.end());
    capacity -= group_demand;
    cw.steps.push_back({k, SelectionStep::Action::Take, fitting, capacity});
  }
  return cw;
}

CeResult ce_stage2(const Market& m, const CandidateWinners& stage1, const CeOptions& opts) {
  CeResult res;
  res.stage1 = stage1;
  emit_selection_trace(opts.trace, m, stage1);
  if (!stage1.found) {
    res.status = CeResult::Status::NoEquilibrium;
    res.reason = kReasonStage1;
    return res;
  }

  const int items = m.item_count();
  const auto alloc = block_allocation(m, stage1.winners);
  std::vector<char> sold(items, 0), winning(m.buyer_count(), 0);
  for (int i : stage1.winners) {
    winning[i] = 1;
    for (int j : alloc[i]) sold[j] = 1;
  }

  lp::Program prog;
  prog.var_count = items;
  prog.sense = lp::Sense::Max;
  prog.objective.assign(items, Rational(0));
  for (int j = 0; j < items; ++j)
    if (sold[j]) prog.objective[j] = 1;

  for (int j = 0; j < items; ++j) {
    if (sold[j]) continue;
    lp::Constraint c;
    c.coeffs.assign(items, Rational(0));
    c.coeffs[j] = 1;
    c.rel = lp::Rel::Eq;
    c.rhs = 0;
    prog.rows.push_back(std::move(c));
  }
  for (int i : stage1.winners) {
    const Rational v = m.buyer(i).value;
    std::vector<char> own(items, 0);
    for (int j : alloc[i]) own[j] = 1;
    // the bundle must not cost more than it is worth
    lp::Constraint budget;
    budget.coeffs.assign(items, Rational(0));
    budget.rel = lp::Rel::Le;
    budget.rhs = 0;
    for (int j : alloc[i]) {
      budget.coeffs[j] = 1;
      budget.rhs += v * m.item(j).quality;
    }
    prog.rows.push_back(std::move(budget));
    // no outside item may beat an owned item at these prices
    for (int j : alloc[i]) {
      for (int jp = 0; jp < items; ++jp) {
        if (own[jp]) continue;
        lp::Constraint c;
        c.coeffs.assign(items, Rational(0));
        c.coeffs[j] = -1;
        c.coeffs[jp] = 1;
        c.rel = lp::Rel::Ge;
        c.rhs = v * (m.item(jp).quality - m.item(j).quality);
        prog.rows.push_back(std::move(c));
      }
    }
  }

  std::vector<int> losers;
  for (int i = 0; i < m.buyer_count(); ++i)
    if (!winning[i]) losers.push_back(i);

  if (opts.lp_debug) *opts.lp_debug << lp::debug_dump(prog);

  const auto view = ValuationView::correlated(m);
  int rounds = 0;
  auto separator = [&](const std::vector<Rational>& point) -> std::optional<lp::Constraint> {
    ++rounds;
    std::vector<Price> prices;
    prices.reserve(point.size());
    for (const auto& p : point) prices.push_back(Price::finite(p));
    for (int i : losers) {
      auto br = best_response(view, i, prices, m.buyer(i).demand);
      if (!br || br->margin <= 0) continue;
      // the loser's best bundle must not be worth more than it costs
      lp::Constraint c;
      c.coeffs.assign(items, Rational(0));
      c.rel = lp::Rel::Ge;
      c.rhs = 0;
      for (int j : br->items) {
        c.coeffs[j] = 1;
        c.rhs += view.value(i, j);
      }
      if (opts.lp_debug) {
        *opts.lp_debug << "cut for buyer " << m.buyer_input_position(i) << ":";
        for (int j : br->items) *opts.lp_debug << " p" << j;
        *opts.lp_debug << " >= " << format_rational(c.rhs) << "\n";
      }
      return c;
    }
    return std::nullopt;
  };

  auto lpres = lp::solve_lazy(prog, separator);
  if (opts.trace)
    *opts.trace << "{\"phase\":\"price\",\"lp_rounds\":" << rounds << ",\"status\":\""
                << (lpres.status == lp::Status::Optimal ? "optimal" : "infeasible") << "\"}\n";
  if (lpres.status == lp::Status::Infeasible) {
    res.status = CeResult::Status::NoEquilibrium;
    res.reason = kReasonStage2;
    return res;
  }
  if (lpres.status == lp::Status::Unbounded)
    throw std::logic_error("price program unbounded despite budget rows");

  Outcome out;
  out.prices.reserve(items);
  for (const auto& p : lpres.point) out.prices.push_back(Price::finite(p));
  out.allocation = alloc;
  if (!is_competitive_equilibrium(view, out))
    throw OutcomeError("solver produced a non-equilibrium outcome");

  res.status = CeResult::Status::Equilibrium;
  res.outcome = std::move(out);
  res.revenue = lpres.objective;
  if (res.revenue != revenue(*res.outcome))
    throw std::logic_error("price program objective disagrees with outcome revenue");
  return res;
}

CeResult solve_ce(const Market& m, const CeOptions& opts) {
  return ce_stage2(m, ce_stage1(m), opts);
}

}  // namespace market
