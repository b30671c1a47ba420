#include "market/lp.hpp"

#include <sstream>
#include <stdexcept>

#include "market/errors.hpp"

namespace market::lp {

namespace {

// Dense tableau: one row per constraint, columns for every structural /
// slack / artificial variable, rhs last.  basis[r] names the column whose
// unit vector lives in row r; the rhs stays non-negative throughout.
struct Tableau {
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<int> basis;
  int cols = 0;

  void pivot(int pr, int pc) {
    Rational inv = 1 / rows[pr][pc];
    if (inv != 1) {
      for (auto& x : rows[pr])
        if (x != 0) x *= inv;
      rows[pr][pc] = 1;  // exact by construction, just avoids drift in debugging
      rhs[pr] *= inv;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(r) == pr) continue;
      Rational factor = rows[r][pc];
      if (factor == 0) continue;
      for (int c = 0; c < cols; ++c)
        if (rows[pr][c] != 0) rows[r][c] -= factor * rows[pr][c];
      rows[r][pc] = 0;
      rhs[r] -= factor * rhs[pr];
    }
    basis[pr] = pc;
  }
};

enum class CoreStatus { Optimal, Unbounded };

// Minimizes cost over the tableau's feasible region with Bland's rule:
// entering column = lowest-index eligible column with a negative reduced
// cost, leaving row = lowest basis index among the minimum-ratio rows.
CoreStatus simplex_min(Tableau& t, const std::vector<Rational>& cost,
                       const std::vector<char>& allowed) {
  // Reduced-cost row, kept in sync by the same row operations as the body.
  std::vector<Rational> z = cost;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const Rational& cb = cost[t.basis[r]];
    if (cb == 0) continue;
    for (int c = 0; c < t.cols; ++c)
      if (t.rows[r][c] != 0) z[c] -= cb * t.rows[r][c];
  }
  for (;;) {
    int entering = -1;
    for (int c = 0; c < t.cols; ++c) {
      if (allowed[c] && z[c] < 0) {
        entering = c;
        break;
      }
    }
    if (entering < 0) return CoreStatus::Optimal;
    int leaving = -1;
    Rational best_ratio;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (t.rows[r][entering] <= 0) continue;
      Rational ratio = t.rhs[r] / t.rows[r][entering];
      if (leaving < 0 || ratio < best_ratio ||
          (ratio == best_ratio && t.basis[r] < t.basis[leaving])) {
        leaving = static_cast<int>(r);
        best_ratio = ratio;
      }
    }
    if (leaving < 0) return CoreStatus::Unbounded;
    Rational pivot_factor = z[entering];
    t.pivot(leaving, entering);
    // Eliminate the entering column from the reduced-cost row.
    for (int c = 0; c < t.cols; ++c)
      if (t.rows[leaving][c] != 0) z[c] -= pivot_factor * t.rows[leaving][c];
    z[entering] = 0;
  }
}

void validate(const Program& p) {
  if (p.var_count < 0) throw ValidationError("lp: negative variable count");
  if (static_cast<int>(p.objective.size()) != p.var_count)
    throw ValidationError("lp: objective length does not match variable count");
  if (!p.free_vars.empty() && static_cast<int>(p.free_vars.size()) != p.var_count)
    throw ValidationError("lp: free-variable mask length does not match variable count");
  for (const auto& row : p.rows)
    if (static_cast<int>(row.coeffs.size()) != p.var_count)
      throw ValidationError("lp: constraint length does not match variable count");
}

}  // namespace

Result solve(const Program& p) {
  validate(p);

  // Column layout: positive part of every variable, then negative parts of
  // free variables, then one slack per inequality, then artificials.
  const int n = p.var_count;
  std::vector<int> neg_col(n, -1);
  int cols = n;
  for (int i = 0; i < n; ++i)
    if (!p.free_vars.empty() && p.free_vars[i]) neg_col[i] = cols++;
  const int slack_base = cols;
  int slack_count = 0;
  for (const auto& row : p.rows)
    if (row.rel != Rel::Eq) ++slack_count;
  cols += slack_count;

  Tableau t;
  t.cols = cols;  // artificials appended below
  int next_slack = slack_base;
  for (const auto& row : p.rows) {
    std::vector<Rational> r(cols, Rational(0));
    for (int i = 0; i < n; ++i) {
      if (row.coeffs[i] == 0) continue;
      r[i] = row.coeffs[i];
      if (neg_col[i] >= 0) r[neg_col[i]] = -row.coeffs[i];
    }
    Rational b = row.rhs;
    Rational slack_sign = 0;
    int slack = -1;
    if (row.rel != Rel::Eq) {
      slack = next_slack++;
      slack_sign = row.rel == Rel::Le ? 1 : -1;
      r[slack] = slack_sign;
    }
    if (b < 0) {  // keep rhs non-negative so a feasible basis is visible
      for (auto& x : r) x = -x;
      b = -b;
      slack_sign = -slack_sign;
    }
    t.rows.push_back(std::move(r));
    t.rhs.push_back(std::move(b));
    // A slack entering with coefficient +1 can seed the basis; anything else
    // needs an artificial variable.
    t.basis.push_back(slack_sign == 1 ? slack : -1);
  }

  int artificial_base = cols;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (t.basis[r] < 0) ++cols;
  if (cols > t.cols) {
    int next_art = artificial_base;
    for (auto& row : t.rows) row.resize(cols, Rational(0));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      if (t.basis[r] < 0) {
        t.rows[r][next_art] = 1;
        t.basis[r] = next_art++;
      }
    }
  }
  t.cols = cols;

  std::vector<char> allowed(cols, 1);
  if (artificial_base < cols) {
    std::vector<Rational> phase1(cols, Rational(0));
    for (int c = artificial_base; c < cols; ++c) phase1[c] = 1;
    simplex_min(t, phase1, allowed);
    Rational infeas = 0;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      if (t.basis[r] >= artificial_base) infeas += t.rhs[r];
    if (infeas != 0) return Result{Status::Infeasible, {}, Rational(0)};
    // Degenerate artificials still in the basis: pivot them out onto any real
    // column, or drop the row as redundant when none exists.
    for (std::size_t r = 0; r < t.rows.size();) {
      if (t.basis[r] < artificial_base) {
        ++r;
        continue;
      }
      int c = 0;
      while (c < artificial_base && t.rows[r][c] == 0) ++c;
      if (c < artificial_base) {
        t.pivot(static_cast<int>(r), c);
        ++r;
      } else {
        t.rows.erase(t.rows.begin() + r);
        t.rhs.erase(t.rhs.begin() + r);
        t.basis.erase(t.basis.begin() + r);
      }
    }
    for (int c = artificial_base; c < cols; ++c) allowed[c] = 0;
  }

  std::vector<Rational> cost(cols, Rational(0));
  for (int i = 0; i < n; ++i) {
    Rational c = p.sense == Sense::Max ? -p.objective[i] : p.objective[i];
    cost[i] = c;
    if (neg_col[i] >= 0) cost[neg_col[i]] = -c;
  }
  if (simplex_min(t, cost, allowed) == CoreStatus::Unbounded)
    return Result{Status::Unbounded, {}, Rational(0)};

  std::vector<Rational> col_value(cols, Rational(0));
  for (std::size_t r = 0; r < t.rows.size(); ++r) col_value[t.basis[r]] = t.rhs[r];
  Result result;
  result.status = Status::Optimal;
  result.point.resize(n);
  for (int i = 0; i < n; ++i) {
    result.point[i] = col_value[i];
    if (neg_col[i] >= 0) result.point[i] -= col_value[neg_col[i]];
  }
  result.objective = 0;
  for (int i = 0; i < n; ++i) result.objective += p.objective[i] * result.point[i];

  // Exactness audit: the returned vertex must satisfy every original row.
  for (const auto& row : p.rows) {
    Rational lhs = 0;
    for (int i = 0; i < n; ++i) lhs += row.coeffs[i] * result.point[i];
    bool ok = row.rel == Rel::Le   ? lhs <= row.rhs
              : row.rel == Rel::Ge ? lhs >= row.rhs
                                   : lhs == row.rhs;
    if (!ok) throw std::logic_error("lp: optimal point fails a constraint re-check");
  }
  for (int i = 0; i < n; ++i)
    if ((p.free_vars.empty() || !p.free_vars[i]) && result.point[i] < 0)
      throw std::logic_error("lp: optimal point violates a variable bound");
  return result;
}

Result solve_lazy(Program p, const Separator& find_violated) {
  for (;;) {
    Result r = solve(p);
    if (r.status != Status::Optimal) return r;
    auto cut = find_violated(r.point);
    if (!cut) return r;
    for (const auto& row : p.rows) {
      if (row.rel == cut->rel && row.rhs == cut->rhs && row.coeffs == cut->coeffs)
        throw std::logic_error("lp: separator returned an already-present row");
    }
    p.rows.push_back(std::move(*cut));
  }
}

std::string debug_dump(const Program& p) {
  std::ostringstream out;
  out << (p.sense == Sense::Max ? "max" : "min");
  for (int i = 0; i < p.var_count; ++i)
    if (p.objective[i] != 0) out << " " << format_rational(p.objective[i]) << "*x" << i;
  out << "\n";
  for (const auto& row : p.rows) {
    bool first = true;
    for (int i = 0; i < p.var_count; ++i) {
      if (row.coeffs[i] == 0) continue;
      out << (first ? "  " : " + ") << format_rational(row.coeffs[i]) << "*x" << i;
      first = false;
    }
    if (first) out << "  0";
    out << (row.rel == Rel::Le ? " <= " : row.rel == Rel::Ge ? " >= " : " == ")
        << format_rational(row.rhs) << "\n";
  }
  for (int i = 0; i < p.var_count; ++i)
    if (!p.free_vars.empty() && p.free_vars[i]) out << "  x" << i << " free\n";
  return out.str();
}

}  // namespace market::lp
