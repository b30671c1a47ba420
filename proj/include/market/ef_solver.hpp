#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "market/market.hpp"

namespace market {

// One round of the candidate-set construction, logged for the counting
// audits: a round is seeded by a max-demand subset of one value group and
// never tracks more than floor(m / seed_demand) sets at once.
struct CandidateAudit {
  int group;        // seeding value group; -1 for the top-group round
  int cap;          // demand cap of the round
  int seed_demand;  // total demand of the seed subset
  int max_tracked;  // peak number of sets held during the round
};

struct CandidateEnumeration {
  std::vector<std::vector<int>> sets;  // deduplicated candidate winner sets
  std::vector<CandidateAudit> audits;  // one per seeded round
};

// Every winner set that can appear in an envy-free solution is in here
// (the collection may be a slight superset; harmless for optimization).
CandidateEnumeration enumerate_candidate_sets(const Market& m);

// Closure of S under forced winners: scanning buyers above max(S)'s group
// from the bottom up, adds any outsider whose demand fits inside the demand
// of the members below it.  If the closure's demand exceeds m, no candidate
// winner set contains S.
std::vector<int> find_winners(const Market& m, const std::vector<int>& s);

// Representative losers for winner set S: per value group from min(S)'s group
// down, the minimum-demand non-member, kept only when it strictly undercuts
// every representative picked before it.  If these buyers are envy-free, all
// losers are.
std::vector<int> find_loser(const Market& m, const std::vector<int>& s);

struct EfSolution {
  Outcome outcome;  // unsold items priced infinite
  Rational total;
  int anchor = -1;  // anchor item rank the winning price program used;
                    // -1 on the single-winner path (no anchor iteration)
};

// Best envy-free pricing for the fixed winner set `s` (ascending ranks) and
// sold-item set `t` (ascending ranks, |t| = d(s)); nullopt when no pricing
// makes this allocation envy-free.  `delta` is the demand bound: the price
// programs operate on the last min(2*delta, |t|) sold items and the chain
// rule prices the rest.
std::optional<EfSolution> max_revenue(const Market& m, const std::vector<int>& s,
                                      const std::vector<int>& t, int delta,
                                      std::ostream* lp_debug = nullptr);

// The dynamic program that picks the low-index sold items when d(s) exceeds
// 2*delta.  Exposed for tests: `weights` are per-position winner values,
// opt[a][b] is the best coefficient-weighted quality sum using a items among
// the first b, and empty cells are unreachable (not zero: coefficients may
// be negative).  `chosen` is the reconstructed optimal item set.
struct DlpTable {
  std::vector<Rational> weights;  // w_0..w_L, w_0 = 0
  std::vector<Rational> coeffs;   // c_a = a*w_a - (a-1)*w_{a-1}, 1-based
  std::vector<std::vector<std::optional<Rational>>> opt;
  std::vector<int> chosen;  // ascending item ranks, |chosen| = L
};
DlpTable dlp_table(const Market& m, const std::vector<int>& s, int j_min, int take);

// For winner set `s` with d(s) > 2*delta and a fixed tail `j` of 2*delta
// sold items (all ranks >= d(s) - 2*delta): fills the table over the items
// below min(j), then prices the best completion.  Callers should have probed
// feasibility with some completion first; tail feasibility does not depend
// on which completion is used.
std::optional<EfSolution> solve_dlp(const Market& m, const std::vector<int>& s,
                                    const std::vector<int>& j, int delta,
                                    std::ostream* lp_debug = nullptr);

struct EfOptions {
  long long budget = 1'000'000;  // max item subsets per winner set
  int jobs = 1;                  // worker threads for the (set, items) sweep
  std::ostream* trace = nullptr;
  std::ostream* lp_debug = nullptr;
  // Observer for every priced solution considered (property-test hook).
  std::function<void(const std::vector<int>&, const std::vector<int>&, const EfSolution&)>
      on_solution;
};

struct EfResult {
  Outcome outcome;
  Rational revenue = 0;
  CandidateEnumeration candidates;
};

// Revenue-maximizing envy-free pricing for demands bounded by `delta`.
// The all-loser outcome (nothing sold, everything priced infinite) is the
// floor; throws BudgetError when some winner set needs more item subsets
// than `budget` allows.
EfResult solve_ef(const Market& m, int delta, const EfOptions& opts = {});

}  // namespace market
