#include "market/ef_solver.hpp"

#include <algorithm>
#include <mutex>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

#include "market/ce_solver.hpp"
#include "market/combinatorics.hpp"
#include "market/errors.hpp"
#include "market/lp.hpp"
#include "market/verify.hpp"

namespace market {

namespace {

// Lexicographically least subset of `pool` with maximal total demand <= cap.
std::vector<int> max_fill(const Market& m, const std::vector<int>& pool, int cap) {
  if (cap <= 0) return {};
  std::vector<char> can(cap + 1, 0);
  can[0] = 1;
  for (int i : pool) {
    const int d = m.buyer(i).demand;
    for (int t = cap; t >= d; --t)
      if (can[t - d]) can[t] = 1;
  }
  int best = cap;
  while (!can[best]) --best;
  if (best == 0) return {};
  return *exact_fill(m, pool, best);
}

struct Tracked {
  std::vector<int> set;  // ascending buyer ranks
  int demand = 0;
};

// One seeded round: insert the buyers ranked 0..upper-1 (all above the seed's
// group) from the bottom up, keeping the demand-sorted list of viable sets.
// A set whose demand already matches or exceeds the inserted buyer's cannot
// stay a candidate without that buyer, so only its extension survives.
std::vector<std::vector<int>> seeded_round(const Market& m, const std::vector<int>& seed,
                                           int upper, int& peak) {
  std::vector<Tracked> list{{seed, total_demand(m, seed)}};
  peak = 1;
  const int cap = m.item_count();
  for (int b = upper - 1; b >= 0 && !list.empty(); --b) {
    const int db = m.buyer(b).demand;
    std::vector<Tracked> next;
    for (const auto& e : list) {
      if (e.demand >= db) break;  // list is demand-sorted
      next.push_back(e);
    }
    for (const auto& e : list) {
      if (e.demand + db > cap) break;
      Tracked ext;
      ext.set.reserve(e.set.size() + 1);
      ext.set.push_back(b);
      ext.set.insert(ext.set.end(), e.set.begin(), e.set.end());
      ext.demand = e.demand + db;
      next.push_back(std::move(ext));
    }
    list = std::move(next);
    peak = std::max(peak, static_cast<int>(list.size()));
  }
  std::vector<std::vector<int>> out;
  out.reserve(list.size());
  for (auto& e : list) out.push_back(std::move(e.set));
  return out;
}

}  // namespace

CandidateEnumeration enumerate_candidate_sets(const Market& m) {
  CandidateEnumeration out;
  const auto groups = value_groups(m);
  const int cap = m.item_count();
  std::set<std::vector<int>> dedup;
  if (groups.count() > 0) {
    auto seed = max_fill(m, groups.members[0], cap);
    if (!seed.empty()) {
      out.audits.push_back({-1, cap, total_demand(m, seed), 1});
      dedup.insert(std::move(seed));
    }
  }
  for (int k = 1; k < groups.count(); ++k) {
    const int upper = groups.members[k].front();
    std::set<std::vector<int>> seeds_seen;
    for (int d = 1; d <= cap; ++d) {
      auto seed = max_fill(m, groups.members[k], d);
      if (seed.empty() || !seeds_seen.insert(seed).second) continue;
      int peak = 0;
      auto finals = seeded_round(m, seed, upper, peak);
      out.audits.push_back({k, d, total_demand(m, seed), peak});
      for (auto& s : finals) dedup.insert(std::move(s));
    }
  }
  out.sets.assign(dedup.begin(), dedup.end());
  return out;
}

std::vector<int> find_winners(const Market& m, const std::vector<int>& s) {
  if (s.empty()) throw ValidationError("find_winners needs a non-empty buyer set");
  const auto groups = value_groups(m);
  const int kstart = groups.members[groups.group_of[s.back()]].front();
  std::vector<char> in(m.buyer_count(), 0);
  for (int i : s) in[i] = 1;
  int below = 0;  // total demand of chosen buyers ranked after the scan point
  for (int i : s)
    if (i >= kstart) below += m.buyer(i).demand;
  for (int r = kstart - 1; r >= 0; --r) {
    if (!in[r] && m.buyer(r).demand <= below) in[r] = 1;
    if (in[r]) below += m.buyer(r).demand;
  }
  std::vector<int> out;
  for (int r = 0; r < m.buyer_count(); ++r)
    if (in[r]) out.push_back(r);
  return out;
}

std::vector<int> find_loser(const Market& m, const std::vector<int>& s) {
  if (s.empty()) throw ValidationError("find_loser needs a non-empty buyer set");
  const auto groups = value_groups(m);
  std::vector<char> in(m.buyer_count(), 0);
  for (int i : s) in[i] = 1;
  std::vector<int> out;
  int alpha = -1;  // running minimum demand; -1 == not set yet
  for (int k = groups.group_of[s.front()]; k < groups.count(); ++k) {
    int pick = -1;
    for (int i : groups.members[k])
      if (!in[i] && (pick == -1 || m.buyer(i).demand < m.buyer(pick).demand)) pick = i;
    if (pick == -1) continue;
    if (alpha == -1 || m.buyer(pick).demand < alpha) {
      out.push_back(pick);
      alpha = m.buyer(pick).demand;
    }
  }
  return out;
}

std::optional<EfSolution> max_revenue(const Market& m, const std::vector<int>& s,
                                      const std::vector<int>& t, int delta,
                                      std::ostream* lp_debug) {
  if (s.empty()) throw ValidationError("winner set must be non-empty");
  for (int i = 0; i < m.buyer_count(); ++i)
    if (m.buyer(i).demand > delta)
      throw ValidationError("buyer " + std::to_string(i) + " demands more than the bound");
  const int ell = static_cast<int>(t.size());
  if (total_demand(m, s) != ell)
    throw ValidationError("sold-item count must equal the winners' total demand");

  const auto alloc = block_allocation(m, s, t);
  std::vector<int> winner_at(ell);  // position in t -> winner rank
  {
    int pos = 0;
    for (int i : s)
      for (int d = 0; d < m.buyer(i).demand; ++d) winner_at[pos++] = i;
  }
  const int nwin = static_cast<int>(s.size());
  const int last = s[nwin - 1];
  const int d_last = m.buyer(last).demand;
  const int prev = nwin >= 2 ? s[nwin - 2] : -1;
  const int d_prev = prev >= 0 ? m.buyer(prev).demand : 0;
  const int last_begin = ell - d_last;        // first position of the last block
  const int prev_begin = last_begin - d_prev;  // first position of the block before it

  const int jn = std::min(2 * delta, ell);
  const int jstart = ell - jn;  // positions jstart.. are priced by the program

  const auto losers = find_loser(m, s);
  const auto view = ValuationView::correlated(m);
  auto quality = [&](int pos) -> const Rational& { return m.item(t[pos]).quality; };

  // Shared rows: the last winner's bundle nets zero, representative losers
  // cannot profit from any bundle inside the priced window, and items in the
  // window above the last two blocks follow the chain rule.
  lp::Program base;
  base.var_count = jn;
  base.objective.assign(jn, Rational(0));
  base.sense = lp::Sense::Max;
  // envy-free prices carry no sign restriction (unlike equilibrium prices)
  base.free_vars.assign(jn, 1);
  {
    lp::Constraint zero_net;
    zero_net.coeffs.assign(jn, Rational(0));
    zero_net.rel = lp::Rel::Eq;
    zero_net.rhs = 0;
    for (int pos = last_begin; pos < ell; ++pos) {
      zero_net.coeffs[pos - jstart] = 1;
      zero_net.rhs += m.buyer(last).value * quality(pos);
    }
    base.rows.push_back(std::move(zero_net));
  }
  for (int i : losers) {
    const int d = m.buyer(i).demand;
    if (d > jn) continue;
    auto c = first_combination(d);
    do {
      lp::Constraint row;
      row.coeffs.assign(jn, Rational(0));
      row.rel = lp::Rel::Ge;
      row.rhs = 0;
      for (int v : c) {
        row.coeffs[v] = 1;
        row.rhs += m.buyer(i).value * quality(jstart + v);
      }
      base.rows.push_back(std::move(row));
    } while (next_combination(c, jn));
  }
  for (int pos = jstart; pos < prev_begin; ++pos) {
    lp::Constraint chain;
    chain.coeffs.assign(jn, Rational(0));
    chain.coeffs[pos - jstart] = 1;
    chain.coeffs[pos + 1 - jstart] = -1;
    chain.rel = lp::Rel::Eq;
    chain.rhs = m.buyer(winner_at[pos]).value * (quality(pos) - quality(pos + 1));
    base.rows.push_back(std::move(chain));
  }

  struct Candidate {
    int anchor_item;
    Outcome out;
    Rational rev;
  };
  std::optional<Candidate> best;

  auto finish = [&](const std::vector<Rational>& point, int anchor_item) {
    std::vector<Rational> price(ell);
    for (int pos = jstart; pos < ell; ++pos) price[pos] = point[pos - jstart];
    for (int pos = jstart - 1; pos >= 0; --pos)
      price[pos] =
          m.buyer(winner_at[pos]).value * (quality(pos) - quality(pos + 1)) + price[pos + 1];
    Outcome out;
    out.prices.assign(m.item_count(), Price::infinite());
    for (int pos = 0; pos < ell; ++pos) out.prices[t[pos]] = Price::finite(price[pos]);
    out.allocation = alloc;
    if (!is_envy_free(view, out)) return;
    Rational rev = revenue(out);
    if (!best || rev > best->rev) best = Candidate{anchor_item, std::move(out), std::move(rev)};
  };

  if (nwin == 1) {
    // Single winner: the program is pure feasibility (revenue is pinned by
    // the zero-net row), so any bounded objective works.
    lp::Program prog = base;
    prog.objective.assign(jn, Rational(1));
    if (lp_debug) *lp_debug << lp::debug_dump(prog);
    auto r = lp::solve(prog);
    if (r.status == lp::Status::Unbounded)
      throw std::logic_error("single-winner price program cannot be unbounded");
    if (r.status == lp::Status::Optimal) finish(r.point, -1);
  } else {
    const Rational vprev = m.buyer(prev).value;
    const Rational vlast = m.buyer(last).value;
    for (int anchor = last_begin; anchor < ell; ++anchor) {
      lp::Program prog = base;
      prog.objective[anchor - jstart] = 1;
      // the anchor carries the previous winner's best margin in the block
      for (int pos = last_begin; pos < ell; ++pos) {
        if (pos == anchor) continue;
        lp::Constraint c;
        c.coeffs.assign(jn, Rational(0));
        c.coeffs[pos - jstart] = 1;
        c.coeffs[anchor - jstart] = -1;
        c.rel = lp::Rel::Ge;
        c.rhs = vprev * (quality(pos) - quality(anchor));
        prog.rows.push_back(std::move(c));
      }
      // the previous winner's items all match the anchor's margin
      for (int pos = prev_begin; pos < last_begin; ++pos) {
        lp::Constraint c;
        c.coeffs.assign(jn, Rational(0));
        c.coeffs[pos - jstart] = 1;
        c.coeffs[anchor - jstart] = -1;
        c.rel = lp::Rel::Eq;
        c.rhs = vprev * (quality(pos) - quality(anchor));
        prog.rows.push_back(std::move(c));
      }
      // the last winner must not prefer the previous winner's items
      for (int pos = prev_begin; pos < last_begin; ++pos) {
        for (int pos2 = last_begin; pos2 < ell; ++pos2) {
          lp::Constraint c;
          c.coeffs.assign(jn, Rational(0));
          c.coeffs[pos - jstart] = 1;
          c.coeffs[pos2 - jstart] = -1;
          c.rel = lp::Rel::Ge;
          c.rhs = vlast * (quality(pos) - quality(pos2));
          prog.rows.push_back(std::move(c));
        }
      }
      if (lp_debug) *lp_debug << lp::debug_dump(prog);
      auto r = lp::solve(prog);
      if (r.status == lp::Status::Unbounded)
        throw std::logic_error("anchored price program cannot be unbounded");
      if (r.status == lp::Status::Optimal) finish(r.point, t[anchor]);
    }
  }

  if (!best) return std::nullopt;
  return EfSolution{std::move(best->out), std::move(best->rev), best->anchor_item};
}

DlpTable dlp_table(const Market& m, const std::vector<int>& s, int j_min, int take) {
  if (take < 0 || j_min < take)
    throw ValidationError("not enough low-index items for the dynamic program");
  DlpTable tab;
  tab.weights.assign(take + 1, Rational(0));
  {
    int pos = 1;
    for (int i : s) {
      for (int d = 0; d < m.buyer(i).demand && pos <= take; ++d) {
        tab.weights[pos] = m.buyer(i).value;
        ++pos;
      }
      if (pos > take) break;
    }
  }
  tab.coeffs.assign(take + 1, Rational(0));
  for (int a = 1; a <= take; ++a)
    tab.coeffs[a] = a * tab.weights[a] - (a - 1) * tab.weights[a - 1];

  tab.opt.assign(take + 1, std::vector<std::optional<Rational>>(j_min + 1));
  for (int b = 0; b <= j_min; ++b) tab.opt[0][b] = Rational(0);
  for (int a = 1; a <= take; ++a) {
    for (int b = a; b <= j_min; ++b) {
      Rational taken = *tab.opt[a - 1][b - 1] + tab.coeffs[a] * m.item(b - 1).quality;
      if (b - 1 >= a && tab.opt[a][b - 1] && *tab.opt[a][b - 1] > taken)
        tab.opt[a][b] = *tab.opt[a][b - 1];
      else
        tab.opt[a][b] = std::move(taken);
    }
  }
  // walk back preferring to skip, which picks the earliest items on ties
  int a = take, b = j_min;
  while (a > 0) {
    if (b - 1 >= a && tab.opt[a][b - 1] && *tab.opt[a][b - 1] == *tab.opt[a][b]) {
      --b;
    } else {
      tab.chosen.push_back(b - 1);
      --a;
      --b;
    }
  }
  std::reverse(tab.chosen.begin(), tab.chosen.end());
  return tab;
}

std::optional<EfSolution> solve_dlp(const Market& m, const std::vector<int>& s,
                                    const std::vector<int>& j, int delta,
                                    std::ostream* lp_debug) {
  const int ell = total_demand(m, s);
  const int take = ell - 2 * delta;
  if (take <= 0)
    throw ValidationError("the dynamic program only applies above twice the demand bound");
  if (static_cast<int>(j.size()) != 2 * delta)
    throw ValidationError("tail must hold exactly twice the demand bound in items");
  for (std::size_t x = 0; x < j.size(); ++x) {
    if (j[x] < take || j[x] >= m.item_count())
      throw ValidationError("tail item out of range");
    if (x > 0 && j[x] <= j[x - 1]) throw ValidationError("tail items must be strictly increasing");
  }
  const int j_min = j.front();
  DlpTable tab = dlp_table(m, s, j_min, take);
  std::vector<int> t = tab.chosen;
  t.insert(t.end(), j.begin(), j.end());
  return max_revenue(m, s, t, delta, lp_debug);
}

EfResult solve_ef(const Market& m, int delta, const EfOptions& opts) {
  if (delta < 1) throw ValidationError("demand bound must be positive");
  for (int i = 0; i < m.buyer_count(); ++i)
    if (m.buyer(i).demand > delta)
      throw ValidationError("buyer " + std::to_string(i) + " demands more than the bound");

  EfResult res;
  res.candidates = enumerate_candidate_sets(m);
  const int items = m.item_count();
  const auto& sets = res.candidates.sets;

  for (const auto& s : sets) {
    const int ell = total_demand(m, s);
    const BigInt work = binomial(items, std::min(ell, 2 * delta));
    if (work > opts.budget)
      throw BudgetError("a winner set needs " + work.str() + " item subsets; the budget is " +
                        std::to_string(opts.budget));
  }

  // floor: sell nothing
  res.outcome.prices.assign(items, Price::infinite());
  res.outcome.allocation.assign(m.buyer_count(), {});
  res.revenue = 0;

  const int jobs = (opts.lp_debug || opts.jobs < 1) ? 1 : opts.jobs;
  std::mutex io;

  struct Best {
    bool any = false;
    Rational rev;
    long long task = -1;
    EfSolution sol;
  };
  std::vector<Best> bests(jobs);
  std::vector<std::exception_ptr> errors(jobs);

  auto for_each_task = [&](auto&& fn) {
    long long id = 0;
    for (std::size_t si = 0; si < sets.size(); ++si) {
      const auto& s = sets[si];
      const int ell = total_demand(m, s);
      if (ell <= 2 * delta) {
        if (ell > items) continue;
        auto c = first_combination(ell);
        do {
          fn(id++, si, c);
        } while (next_combination(c, items));
      } else {
        const int lo = ell - 2 * delta;
        const int avail = items - lo;
        if (2 * delta > avail) continue;
        auto c = first_combination(2 * delta);
        do {
          std::vector<int> jset(c.size());
          for (std::size_t x = 0; x < c.size(); ++x) jset[x] = lo + c[x];
          fn(id++, si, jset);
        } while (next_combination(c, avail));
      }
    }
  };

  auto run_task = [&](long long id, std::size_t si, const std::vector<int>& jset, Best& mine) {
    const auto& s = sets[si];
    const int ell = total_demand(m, s);
    std::optional<EfSolution> sol;
    if (ell <= 2 * delta) {
      sol = max_revenue(m, s, jset, delta, opts.lp_debug);
    } else {
      const int take = ell - 2 * delta;
      const int j_min = jset.front();
      std::vector<int> probe;
      for (int r = j_min - take; r < j_min; ++r) probe.push_back(r);
      probe.insert(probe.end(), jset.begin(), jset.end());
      if (max_revenue(m, s, probe, delta, opts.lp_debug)) {
        sol = solve_dlp(m, s, jset, delta, opts.lp_debug);
        if (!sol)
          throw std::logic_error("tail feasibility must not depend on the completion");
      }
    }
    if (opts.trace || (sol && opts.on_solution)) {
      std::vector<int> sold;
      if (sol)
        for (int rank = 0; rank < items; ++rank)
          if (!sol->outcome.prices[rank].is_infinite()) sold.push_back(rank);
      std::lock_guard<std::mutex> lock(io);
      if (opts.trace) {
        auto& outp = *opts.trace;
        outp << "{\"phase\":\"sweep\",\"set\":[";
        for (std::size_t x = 0; x < s.size(); ++x)
          outp << (x ? "," : "") << m.buyer_input_position(s[x]);
        outp << "],\"items\":[";
        const auto& shown = sol ? sold : jset;
        for (std::size_t x = 0; x < shown.size(); ++x)
          outp << (x ? "," : "") << m.item_input_position(shown[x]);
        outp << "],\"revenue\":\"" << format_rational(sol ? sol->total : Rational(0))
             << "\",\"feasible\":" << (sol ? "true" : "false") << "}\n";
      }
      if (sol && opts.on_solution) opts.on_solution(s, sold, *sol);
    }
    if (sol && (!mine.any || sol->total > mine.rev ||
                (sol->total == mine.rev && id < mine.task))) {
      mine.any = true;
      mine.rev = sol->total;
      mine.task = id;
      mine.sol = std::move(*sol);
    }
  };

  auto worker = [&](int tid) {
    try {
      for_each_task([&](long long id, std::size_t si, const std::vector<int>& jset) {
        if (id % jobs != tid) return;
        run_task(id, si, jset, bests[tid]);
      });
    } catch (...) {
      errors[tid] = std::current_exception();
    }
  };

  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int tid = 0; tid < jobs; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);

  const Best* merged = nullptr;
  for (const auto& b : bests) {
    if (!b.any) continue;
    if (!merged || b.rev > merged->rev || (b.rev == merged->rev && b.task < merged->task))
      merged = &b;
  }
  if (merged) {
    res.outcome = merged->sol.outcome;
    res.revenue = merged->sol.total;
  }
  return res;
}

}  // namespace market
