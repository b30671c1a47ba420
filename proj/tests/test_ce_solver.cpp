#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "market/ce_solver.hpp"
#include "market/oracle.hpp"
#include "market/random_gen.hpp"
#include "market/verify.hpp"

using namespace market;

TEST_CASE("exact_fill finds the lexicographically least exact subset") {
  auto m = Market::canonicalize({{Buyer{5, 1}, Buyer{5, 2}}, {Item{1}, Item{1}}});
  auto fill = exact_fill(m, {0, 1}, 2);
  REQUIRE(fill.has_value());
  CHECK(*fill == std::vector<int>{1});  // buyer 0 alone cannot reach 2

  CHECK(exact_fill(m, {0, 1}, 0) == std::vector<int>{});

  auto parity = Market::canonicalize({{Buyer{5, 2}, Buyer{5, 2}}, {Item{1}, Item{1}, Item{1}}});
  CHECK_FALSE(exact_fill(parity, {0, 1}, 3).has_value());

  auto three = Market::canonicalize(
      {{Buyer{5, 1}, Buyer{5, 1}, Buyer{5, 2}}, {Item{1}, Item{1}}});
  auto least = exact_fill(three, {0, 1, 2}, 2);
  REQUIRE(least.has_value());
  CHECK(*least == std::vector<int>{0, 1});  // beats {2} lexicographically
}

TEST_CASE("exact_fill agrees with brute force over random pools") {
  std::mt19937_64 rng(31);
  for (int iteration = 0; iteration < 100; ++iteration) {
    auto m = fixtures::mk(random_instance(1 + rng() % 5, 1 + rng() % 4, 3, 5, rng()));
    std::vector<int> pool;
    for (int i = 0; i < m.buyer_count(); ++i) pool.push_back(i);
    const int target = rng() % 8;
    auto got = exact_fill(m, pool, target);

    // reference: scan subsets in lexicographic order of their member lists
    std::optional<std::vector<int>> want;
    const int n = m.buyer_count();
    std::vector<std::vector<int>> subsets{{}};
    for (int i = 0; i < n; ++i) {  // builds the lexicographic order recursively
      std::vector<std::vector<int>> next;
      for (auto& s : subsets) {
        auto with = s;
        with.push_back(i);
        next.push_back(s);
        next.push_back(std::move(with));
      }
      subsets = std::move(next);
    }
    std::sort(subsets.begin(), subsets.end());
    for (const auto& s : subsets) {
      if (total_demand(m, s) == target) {
        want = s;
        break;
      }
    }
    CHECK(got == want);
  }
}

TEST_CASE("winner selection takes whole groups while they fit") {
  auto cw = ce_stage1(fixtures::mk(fixtures::staircase()));
  CHECK(cw.found);
  CHECK(cw.winners == std::vector<int>{0, 1});
  REQUIRE(cw.steps.size() == 2);
  CHECK(cw.steps[0].action == SelectionStep::Action::Take);
  CHECK(cw.steps[0].taken == std::vector<int>{0});
  CHECK(cw.steps[0].capacity_after == 2);
  CHECK(cw.steps[1].action == SelectionStep::Action::Take);
  CHECK(cw.steps[1].capacity_after == 0);
}

TEST_CASE("winner selection skips groups nothing in which fits") {
  auto cw = ce_stage1(fixtures::mk(fixtures::no_ce()));
  CHECK(cw.found);
  CHECK(cw.winners == std::vector<int>{0});
  REQUIRE(cw.steps.size() == 2);
  CHECK(cw.steps[0].action == SelectionStep::Action::Take);
  CHECK(cw.steps[1].action == SelectionStep::Action::Skip);
  CHECK(cw.steps[1].taken.empty());
  CHECK(cw.steps[1].capacity_after == 1);
}

TEST_CASE("an overflowing group must fill the capacity exactly") {
  auto m = Market::canonicalize({{Buyer{5, 2}, Buyer{5, 1}}, {Item{1}, Item{1}}});
  auto cw = ce_stage1(m);
  CHECK(cw.found);
  CHECK(cw.winners == std::vector<int>{0});
  REQUIRE(cw.steps.size() == 1);
  CHECK(cw.steps[0].action == SelectionStep::Action::FillExact);
  CHECK(cw.steps[0].capacity_after == 0);
}

TEST_CASE("the whole top group exactly filling the market is a plain take") {
  auto cw = ce_stage1(fixtures::mk(fixtures::exact_fill()));
  CHECK(cw.found);
  CHECK(cw.winners == std::vector<int>{0});
  REQUIRE(cw.steps.size() == 2);
  CHECK(cw.steps[0].action == SelectionStep::Action::Take);
  CHECK(cw.steps[0].capacity_after == 0);
  CHECK(cw.steps[1].action == SelectionStep::Action::Skip);
}

TEST_CASE("no exact fill means no equilibrium") {
  auto m = Market::canonicalize(
      {{Buyer{5, 2}, Buyer{5, 2}}, {Item{1}, Item{1}, Item{1}}});
  auto cw = ce_stage1(m);
  CHECK_FALSE(cw.found);
  CHECK(cw.failed_group == 0);

  auto res = solve_ce(m);
  CHECK(res.status == CeResult::Status::NoEquilibrium);
  CHECK(res.reason == kReasonStage1);
  CHECK_FALSE(res.outcome.has_value());
}

TEST_CASE("the no-equilibrium market fails at the pricing stage") {
  auto res = solve_ce(fixtures::mk(fixtures::no_ce()));
  CHECK(res.status == CeResult::Status::NoEquilibrium);
  CHECK(res.reason == kReasonStage2);
}

TEST_CASE("the sellout market nets twenty") {
  auto res = solve_ce(fixtures::mk(fixtures::exact_fill()));
  REQUIRE(res.status == CeResult::Status::Equilibrium);
  CHECK(res.revenue == 20);
  REQUIRE(res.outcome.has_value());
  CHECK(res.outcome->allocation == std::vector<std::vector<int>>{{0, 1}, {}});
}

TEST_CASE("the staircase market clears at seventy-five") {
  auto m = fixtures::mk(fixtures::staircase());
  auto res = solve_ce(m);
  REQUIRE(res.status == CeResult::Status::Equilibrium);
  CHECK(res.revenue == 75);
  CHECK(is_competitive_equilibrium(ValuationView::correlated(m), *res.outcome));
}

TEST_CASE("the fractional market agrees with the reference solver") {
  auto m = fixtures::mk(fixtures::fractional());
  auto res = solve_ce(m);
  auto ref = brute_ce(ValuationView::correlated(m));
  REQUIRE(ref.exists);
  REQUIRE(res.status == CeResult::Status::Equilibrium);
  CHECK(res.revenue == ref.revenue);
  CHECK(res.revenue == Rational(31, 10));
}

TEST_CASE("a single buyer pays exactly their value") {
  auto m = Market::canonicalize({{Buyer{7, 1}}, {Item{2}}});
  auto res = solve_ce(m);
  REQUIRE(res.status == CeResult::Status::Equilibrium);
  CHECK(res.revenue == 14);
  CHECK(res.outcome->prices[0] == Price::finite(14));
}

TEST_CASE("degenerate markets settle quietly") {
  auto no_items = Market::canonicalize({{Buyer{5, 2}}, {}});
  auto r1 = solve_ce(no_items);
  REQUIRE(r1.status == CeResult::Status::Equilibrium);
  CHECK(r1.revenue == 0);
  CHECK(r1.outcome->allocation == std::vector<std::vector<int>>{{}});

  auto no_buyers = Market::canonicalize({{}, {Item{3}}});
  auto r2 = solve_ce(no_buyers);
  REQUIRE(r2.status == CeResult::Status::Equilibrium);
  CHECK(r2.revenue == 0);
  CHECK(r2.outcome->prices[0] == Price::finite(0));
}

TEST_CASE("selection traces come out as one JSON object per line") {
  std::ostringstream trace;
  CeOptions opts;
  opts.trace = &trace;
  solve_ce(fixtures::mk(fixtures::staircase()), opts);
  auto text = trace.str();
  CHECK(text.find("\"phase\":\"select\"") != std::string::npos);
  CHECK(text.find("\"action\":\"take\"") != std::string::npos);
  CHECK(text.find("\"phase\":\"price\"") != std::string::npos);
}

TEST_CASE("returned equilibria always verify and match the reference") {
  std::mt19937_64 rng(523);
  int equilibria = 0;
  for (int iteration = 0; iteration < 60; ++iteration) {
    auto m = fixtures::mk(random_instance(1 + rng() % 4, 1 + rng() % 5, 2, 8, rng()));
    auto view = ValuationView::correlated(m);
    auto res = solve_ce(m);
    auto ref = brute_ce(view);
    if (res.status == CeResult::Status::Equilibrium) {
      ++equilibria;
      REQUIRE(ref.exists);
      CHECK(res.revenue == ref.revenue);
      CHECK(is_competitive_equilibrium(view, *res.outcome));
      CHECK(revenue(*res.outcome) == res.revenue);
    } else {
      CHECK_FALSE(ref.exists);
    }
  }
  CHECK(equilibria > 10);
}
