#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "market/rational.hpp"

namespace market::lp {

enum class Rel { Le, Eq, Ge };
enum class Sense { Max, Min };

struct Constraint {
  std::vector<Rational> coeffs;  // one per variable
  Rel rel = Rel::Le;
  Rational rhs;
};

// A linear program over exact rationals.  Variables are bounded below by 0
// unless marked free; there are no other bounds (price LPs never need them).
struct Program {
  int var_count = 0;
  Sense sense = Sense::Max;
  std::vector<Rational> objective;  // size var_count
  std::vector<Constraint> rows;
  std::vector<char> free_vars;  // empty == all lower-bounded at 0
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  std::vector<Rational> point;  // variable values when Optimal
  Rational objective;           // exact optimal value when Optimal
};

// Two-phase primal simplex with Bland's anti-cycling rule, exact throughout.
// Optimal results are re-checked against every row before being returned.
Result solve(const Program& p);

// Returns a violated constraint for the proposed point, or nullopt to accept.
using Separator = std::function<std::optional<Constraint>(const std::vector<Rational>&)>;

// Cutting-plane driver: solve, ask the separator, append, repeat.  The
// separator must draw from a finite family; returning a row that is already
// present is reported as a logic error (it would loop forever).  A non-
// Optimal status is returned as-is: Infeasible stays infeasible under more
// rows, and an Unbounded relaxation means the caller's eager rows fail to
// bound the objective.
Result solve_lazy(Program p, const Separator& find_violated);

// Human-readable rendering for the debug dump.
std::string debug_dump(const Program& p);

}  // namespace market::lp
