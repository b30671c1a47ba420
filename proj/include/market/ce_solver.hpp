#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "market/market.hpp"

namespace market {

// One iteration of the candidate-winner scan.  Groups are visited from the
// highest value down; each either fits entirely (Take), has no member small
// enough for the remaining capacity (Skip), or must fill the remaining
// capacity exactly with a demand subset (FillExact, which ends the scan).
struct SelectionStep {
  enum class Action { Take, Skip, FillExact };
  int group;
  Action action;
  std::vector<int> taken;  // buyer ranks admitted this step, ascending
  int capacity_after;      // items still available afterwards
};

struct CandidateWinners {
  bool found = true;        // false: a group overflowed and no exact fill exists
  std::vector<int> winners;  // ascending buyer ranks
  std::vector<SelectionStep> steps;
  int failed_group = -1;  // the overflowing group when !found
};

// Lexicographically least subset of `pool` (ascending buyer ranks) whose
// demands sum to exactly `target`; nullopt when impossible.
std::optional<std::vector<int>> exact_fill(const Market& m, const std::vector<int>& pool,
                                           int target);

CandidateWinners ce_stage1(const Market& m);

inline constexpr const char* kReasonStage1 = "stage1-subset-sum";
inline constexpr const char* kReasonStage2 = "stage2-lp-infeasible";

struct CeResult {
  enum class Status { Equilibrium, NoEquilibrium };
  Status status = Status::NoEquilibrium;
  std::string reason;               // one of the kReason* strings, or empty
  std::optional<Outcome> outcome;   // present iff Status::Equilibrium
  Rational revenue = 0;
  CandidateWinners stage1;
};

struct CeOptions {
  std::ostream* trace = nullptr;     // one JSON object per line when set
  std::ostream* lp_debug = nullptr;  // price-program dumps when set
};

// Prices the fixed greedy allocation for the candidate winners by LP:
// maximize total price of sold items subject to zero prices on unsold items,
// winners preferring their own items and ending with non-negative utility,
// and no loser bundle with positive margin (generated lazily).  The returned
// equilibrium is re-verified before being handed back.
CeResult ce_stage2(const Market& m, const CandidateWinners& stage1, const CeOptions& opts = {});

CeResult solve_ce(const Market& m, const CeOptions& opts = {});

}  // namespace market
