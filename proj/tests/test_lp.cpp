#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "market/lp.hpp"

using namespace market;
using namespace market::lp;

namespace {

Constraint row(std::vector<Rational> coeffs, Rel rel, Rational rhs) {
  return Constraint{std::move(coeffs), rel, std::move(rhs)};
}

// Independent optimum finder for bounded programs over x >= 0: enumerate
// every basic point (each choice of var_count tight constraints among rows
// and the non-negativity bounds), keep the feasible ones, take the best
// objective.  A bounded feasible region in this form always has a vertex,
// and some optimal vertex attains the optimum.
std::optional<Rational> vertex_optimum(const Program& p) {
  const int v = p.var_count;
  const int r = static_cast<int>(p.rows.size());
  const int total = r + v;  // candidate tight sets: rows then x_i = 0 bounds

  if (v == 0) return std::nullopt;
  std::optional<Rational> best;

  // iterate over all v-subsets of `total` constraints
  std::vector<int> c(v);
  for (int i = 0; i < v; ++i) c[i] = i;
  auto advance = [&]() {
    int i = v - 1;
    while (i >= 0 && c[i] == total - v + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < v; ++j) c[j] = c[j - 1] + 1;
    return true;
  };

  do {
    // assemble and solve the v x v linear system by Gaussian elimination
    std::vector<std::vector<Rational>> a(v, std::vector<Rational>(v + 1, Rational(0)));
    for (int i = 0; i < v; ++i) {
      if (c[i] < r) {
        for (int j = 0; j < v; ++j) a[i][j] = p.rows[c[i]].coeffs[j];
        a[i][v] = p.rows[c[i]].rhs;
      } else {
        a[i][c[i] - r] = 1;
      }
    }
    bool singular = false;
    for (int col = 0; col < v && !singular; ++col) {
      int piv = -1;
      for (int i = col; i < v; ++i)
        if (a[i][col] != 0) {
          piv = i;
          break;
        }
      if (piv == -1) {
        singular = true;
        break;
      }
      std::swap(a[col], a[piv]);
      for (int i = 0; i < v; ++i) {
        if (i == col || a[i][col] == 0) continue;
        Rational f = a[i][col] / a[col][col];
        for (int j = col; j <= v; ++j) a[i][j] -= f * a[col][j];
      }
    }
    if (singular) continue;
    std::vector<Rational> x(v);
    for (int i = 0; i < v; ++i) x[i] = a[i][v] / a[i][i];

    bool feasible = true;
    for (int i = 0; i < v && feasible; ++i)
      if (x[i] < 0) feasible = false;
    for (int i = 0; i < r && feasible; ++i) {
      Rational lhs = 0;
      for (int j = 0; j < v; ++j) lhs += p.rows[i].coeffs[j] * x[j];
      if (p.rows[i].rel == Rel::Le && lhs > p.rows[i].rhs) feasible = false;
      if (p.rows[i].rel == Rel::Ge && lhs < p.rows[i].rhs) feasible = false;
      if (p.rows[i].rel == Rel::Eq && lhs != p.rows[i].rhs) feasible = false;
    }
    if (!feasible) continue;
    Rational obj = 0;
    for (int j = 0; j < v; ++j) obj += p.objective[j] * x[j];
    if (p.sense == Sense::Min) obj = -obj;
    if (!best || obj > *best) best = obj;
  } while (advance());

  if (best && p.sense == Sense::Min) return -*best;
  return best;
}

}  // namespace

TEST_CASE("a one-variable interval maximizes at its top") {
  Program p;
  p.var_count = 1;
  p.objective = {1};
  p.rows.push_back(row({1}, Rel::Le, 25));
  p.rows.push_back(row({1}, Rel::Ge, 15));
  auto r = solve(p);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.objective == 25);
  CHECK(r.point == std::vector<Rational>{25});
}

TEST_CASE("contradictory bounds are infeasible") {
  Program p;
  p.var_count = 1;
  p.objective = {1};
  p.rows.push_back(row({1}, Rel::Le, -1));  // against the implicit x >= 0
  CHECK(solve(p).status == Status::Infeasible);
}

TEST_CASE("a free maximization without rows is unbounded") {
  Program p;
  p.var_count = 1;
  p.objective = {1};
  CHECK(solve(p).status == Status::Unbounded);
}

TEST_CASE("free variables may go negative") {
  Program p;
  p.var_count = 1;
  p.sense = Sense::Min;
  p.objective = {1};
  p.free_vars = {1};
  p.rows.push_back(row({1}, Rel::Ge, -5));
  auto r = solve(p);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.objective == -5);
  CHECK(r.point == std::vector<Rational>{-5});
}

TEST_CASE("equality rows bind exactly") {
  Program p;
  p.var_count = 2;
  p.objective = {1, 0};
  p.rows.push_back(row({1, 1}, Rel::Eq, Rational(7, 2)));
  p.rows.push_back(row({1, -1}, Rel::Le, 1));
  auto r = solve(p);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.objective == Rational(9, 4));
  CHECK(r.point[0] + r.point[1] == Rational(7, 2));
}

TEST_CASE("fractional data stays exact") {
  Program p;
  p.var_count = 2;
  p.objective = {Rational(1, 3), Rational(1, 7)};
  p.rows.push_back(row({Rational(2, 5), 1}, Rel::Le, Rational(11, 10)));
  p.rows.push_back(row({1, Rational(1, 2)}, Rel::Le, Rational(9, 4)));
  auto r = solve(p);
  REQUIRE(r.status == Status::Optimal);
  auto best = vertex_optimum(p);
  REQUIRE(best.has_value());
  CHECK(r.objective == *best);
}

TEST_CASE("the two-item sellout program nets twenty") {
  // seller maximizes p0 + p1; the 2-demand winner is held to non-negative
  // utility (p0 + p1 <= 20) and a value-1 loser must gain nothing from
  // either single item (p0 >= 1, p1 >= 1)
  Program p;
  p.var_count = 2;
  p.objective = {1, 1};
  p.rows.push_back(row({1, 1}, Rel::Le, 20));
  p.rows.push_back(row({1, 0}, Rel::Ge, 1));
  p.rows.push_back(row({0, 1}, Rel::Ge, 1));
  auto r = solve(p);
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.objective == 20);
}

TEST_CASE("random bounded programs agree with vertex enumeration") {
  std::mt19937 rng(20240817);
  auto coin = [&](int lo, int hi) { return static_cast<int>(rng() % (hi - lo + 1)) + lo; };
  int optimal_seen = 0, infeasible_seen = 0;
  for (int iteration = 0; iteration < 120; ++iteration) {
    Program p;
    p.var_count = coin(1, 3);
    p.sense = rng() % 2 ? Sense::Max : Sense::Min;
    for (int j = 0; j < p.var_count; ++j) p.objective.push_back(coin(-3, 3));
    const int rows = coin(0, 3);
    for (int i = 0; i < rows; ++i) {
      Constraint c;
      for (int j = 0; j < p.var_count; ++j) c.coeffs.push_back(coin(-3, 3));
      c.rel = static_cast<Rel>(coin(0, 2));
      c.rhs = coin(-6, 6);
      p.rows.push_back(std::move(c));
    }
    // cap the simplex so every feasible program is bounded and has a vertex
    p.rows.push_back(row(std::vector<Rational>(p.var_count, Rational(1)), Rel::Le, coin(1, 8)));

    auto got = solve(p);
    auto want = vertex_optimum(p);
    if (want) {
      ++optimal_seen;
      REQUIRE(got.status == Status::Optimal);
      CHECK(got.objective == *want);
    } else {
      ++infeasible_seen;
      REQUIRE(got.status == Status::Infeasible);
    }
  }
  // the generator must exercise both outcomes for the sweep to mean much
  CHECK(optimal_seen > 20);
  CHECK(infeasible_seen > 20);
}

TEST_CASE("an always-accepting separator changes nothing") {
  Program p;
  p.var_count = 2;
  p.objective = {1, 1};
  p.rows.push_back(row({1, 0}, Rel::Le, 10));
  p.rows.push_back(row({0, 1}, Rel::Le, 10));
  auto eager = solve(p);
  auto lazy = solve_lazy(p, [](const std::vector<Rational>&) { return std::nullopt; });
  REQUIRE(eager.status == Status::Optimal);
  REQUIRE(lazy.status == Status::Optimal);
  CHECK(lazy.objective == eager.objective);
  CHECK(lazy.point == eager.point);
}

TEST_CASE("cuts are applied until the point satisfies the separator") {
  Program p;
  p.var_count = 2;
  p.objective = {1, 1};
  p.rows.push_back(row({1, 0}, Rel::Le, 10));
  p.rows.push_back(row({0, 1}, Rel::Le, 10));
  int cuts = 0;
  auto r = solve_lazy(p, [&](const std::vector<Rational>& x) -> std::optional<Constraint> {
    if (x[0] + x[1] <= 15) return std::nullopt;
    ++cuts;
    return row({1, 1}, Rel::Le, 15);
  });
  REQUIRE(r.status == Status::Optimal);
  CHECK(r.objective == 15);
  CHECK(cuts == 1);
}

TEST_CASE("a separator that repeats a satisfied row is a logic error") {
  Program p;
  p.var_count = 1;
  p.objective = {1};
  p.rows.push_back(row({1}, Rel::Le, 5));
  CHECK_THROWS_AS(
      solve_lazy(p, [](const std::vector<Rational>&) { return row({1}, Rel::Le, 5); }),
      std::logic_error);
}

TEST_CASE("lazy infeasibility is reported as-is") {
  Program p;
  p.var_count = 1;
  p.objective = {1};
  p.rows.push_back(row({1}, Rel::Le, -2));
  auto r = solve_lazy(p, [](const std::vector<Rational>&) { return std::nullopt; });
  CHECK(r.status == Status::Infeasible);
}

TEST_CASE("debug dump renders every row") {
  Program p;
  p.var_count = 2;
  p.objective = {1, Rational(1, 2)};
  p.rows.push_back(row({1, -1}, Rel::Ge, 3));
  auto text = debug_dump(p);
  CHECK(text.find("max") != std::string::npos);
  CHECK(text.find(">=") != std::string::npos);
}
