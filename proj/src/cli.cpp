#include "market/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "market/ce_solver.hpp"
#include "market/ef_solver.hpp"
#include "market/errors.hpp"
#include "market/gadgets.hpp"
#include "market/json_io.hpp"
#include "market/oracle.hpp"
#include "market/random_gen.hpp"
#include "market/verify.hpp"

namespace market {

namespace {

long long enumeration_budget() {
  const char* env = std::getenv("MARKET_BUDGET");
  if (!env) return 1'000'000;
  std::string s(env);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < 1) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("MARKET_BUDGET must be a positive integer");
  }
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write " + out_path);
  out << j.dump(2) << "\n";
}

// An instance file either carries a value-times-quality market ("buyers" /
// "items") or an explicit valuation matrix ("demands" / "valuations").
bool is_general_file(const Json& j) { return j.is_object() && j.contains("valuations"); }

Json envy_to_json(const EnvyWitness& w, const Market* m) {
  Json v;
  v["kind"] = "envy";
  v["buyer"] = m ? m->buyer_input_position(w.buyer) : w.buyer;
  Json envied = Json::array();
  {
    std::vector<int> items;
    for (int j : w.envied) items.push_back(m ? m->item_input_position(j) : j);
    std::sort(items.begin(), items.end());
    for (int j : items) envied.push_back(j);
  }
  v["envied"] = std::move(envied);
  v["gain"] = rational_to_json(w.gain);
  return v;
}

Json ce_violation_to_json(const CeViolation& v, const Market* m) {
  switch (v.kind) {
    case CeViolation::Kind::InfinitePrice: {
      Json j;
      j["kind"] = "infinite-price";
      j["item"] = m ? m->item_input_position(v.item) : v.item;
      return j;
    }
    case CeViolation::Kind::UnsoldNonzeroPrice: {
      Json j;
      j["kind"] = "unsold-nonzero-price";
      j["item"] = m ? m->item_input_position(v.item) : v.item;
      return j;
    }
    case CeViolation::Kind::Envy:
      return envy_to_json(*v.envy, m);
  }
  throw std::logic_error("unreachable violation kind");
}

int cmd_solve_ce(const std::string& path, const std::string& out_path, bool verbose,
                 bool debug_lp) {
  const Json j = load_json_file(path);
  if (is_general_file(j))
    throw ParseError("solve-ce needs a value-times-quality instance");
  const Market m = Market::canonicalize(parse_instance(j));
  CeOptions opts;
  if (verbose) opts.trace = &std::cerr;
  if (debug_lp) opts.lp_debug = &std::cerr;
  const CeResult r = solve_ce(m, opts);
  SolutionFile s;
  if (r.status == CeResult::Status::Equilibrium) {
    s.status = "equilibrium";
    s.outcome = outcome_to_input_order(m, *r.outcome);
    s.revenue = r.revenue;
    emit(serialize_solution(s), out_path);
    return 0;
  }
  s.status = "no-equilibrium";
  s.reason = r.reason;
  emit(serialize_solution(s), out_path);
  return 2;
}

int cmd_solve_ef(const std::string& path, int max_demand, int jobs, const std::string& out_path,
                 bool verbose, bool debug_lp) {
  const Json j = load_json_file(path);
  if (is_general_file(j))
    throw ParseError("solve-ef needs a value-times-quality instance");
  const Market m = Market::canonicalize(parse_instance(j));
  int delta = max_demand;
  if (delta == 0) {  // default: the largest demand present
    delta = 1;
    for (int i = 0; i < m.buyer_count(); ++i) delta = std::max(delta, m.buyer(i).demand);
  }
  EfOptions opts;
  opts.budget = enumeration_budget();
  opts.jobs = jobs;
  if (verbose) opts.trace = &std::cerr;
  if (debug_lp) opts.lp_debug = &std::cerr;
  const EfResult r = solve_ef(m, delta, opts);
  SolutionFile s;
  s.status = "envy-free";
  s.outcome = outcome_to_input_order(m, r.outcome);
  s.revenue = r.revenue;
  emit(serialize_solution(s), out_path);
  return 0;
}

int cmd_verify(const std::string& inst_path, const std::string& sol_path,
               const std::string& mode, const std::string& out_path) {
  const Json ij = load_json_file(inst_path);
  const SolutionFile s = parse_solution(load_json_file(sol_path));
  if (!s.outcome) throw ParseError("the solution file carries no outcome to verify");

  // keep the market alive for the view regardless of kind
  std::optional<Market> corr;
  std::optional<GeneralMarket> gen;
  std::optional<ValuationView> view;
  Outcome by_rank;
  const Market* mapper = nullptr;
  if (is_general_file(ij)) {
    gen = parse_general(ij);
    view = ValuationView::general(*gen);
    by_rank = *s.outcome;
    view->check_outcome_shape(by_rank);
  } else {
    corr = Market::canonicalize(parse_instance(ij));
    mapper = &*corr;
    by_rank = outcome_to_rank_order(*corr, *s.outcome);
    view = ValuationView::correlated(*corr);
    view->check_outcome_shape(by_rank);
  }

  Json report;
  if (s.revenue && *s.revenue != revenue(by_rank)) {
    report["certified"] = false;
    Json v;
    v["kind"] = "revenue-mismatch";
    v["stated"] = rational_to_json(*s.revenue);
    v["actual"] = rational_to_json(revenue(by_rank));
    report["violation"] = std::move(v);
    emit(report, out_path);
    return 3;
  }
  if (mode == "ce") {
    if (auto v = find_ce_violation(*view, by_rank)) {
      report["certified"] = false;
      report["violation"] = ce_violation_to_json(*v, mapper);
      emit(report, out_path);
      return 3;
    }
  } else {
    if (auto w = find_envy(*view, by_rank)) {
      report["certified"] = false;
      report["violation"] = envy_to_json(*w, mapper);
      emit(report, out_path);
      return 3;
    }
  }
  report["certified"] = true;
  emit(report, out_path);
  return 0;
}

int cmd_oracle(const std::string& path, const std::string& mode, const std::string& out_path) {
  const Json j = load_json_file(path);
  const long long budget = enumeration_budget();
  std::optional<Market> corr;
  std::optional<GeneralMarket> gen;
  std::optional<ValuationView> view;
  const Market* mapper = nullptr;
  if (is_general_file(j)) {
    gen = parse_general(j);
    view = ValuationView::general(*gen);
  } else {
    corr = Market::canonicalize(parse_instance(j));
    mapper = &*corr;
    view = ValuationView::correlated(*corr);
  }
  auto to_input = [&](const Outcome& o) {
    return mapper ? outcome_to_input_order(*mapper, o) : o;
  };
  SolutionFile s;
  if (mode == "ce") {
    const BruteCeResult r = brute_ce(*view, budget);
    if (!r.exists) {
      s.status = "no-equilibrium";
      emit(serialize_solution(s), out_path);
      return 2;
    }
    s.status = "equilibrium";
    s.outcome = to_input(r.outcome);
    s.revenue = r.revenue;
    emit(serialize_solution(s), out_path);
    return 0;
  }
  const BruteEfResult r = brute_ef_max(*view, budget);
  s.status = "envy-free";
  s.outcome = to_input(r.outcome);
  s.revenue = r.revenue;
  emit(serialize_solution(s), out_path);
  return 0;
}

int cmd_gen_gadget(const std::string& path, const std::string& which, bool pad,
                   const std::string& out_path) {
  X3CInstance inst = parse_x3c(load_json_file(path));
  if (pad) inst = pad_x3c(inst);
  if (which == "ef") {
    const EfGadget g = reduce_x3c_to_ef(inst);
    emit(serialize_instance(g.instance), out_path);
    return 0;
  }
  const CeGadget g = reduce_x3c_to_ce_general(inst);
  emit(serialize_general(g.market, g.witness), out_path);
  return 0;
}

int cmd_gen_random(int buyers, int items, int max_demand, int max_value,
                   unsigned long long seed, const std::string& out_path) {
  if (buyers < 1 || items < 1)
    throw ValidationError("need at least one buyer and one item");
  const RawInstance raw = random_instance(buyers, items, max_demand, max_value, seed);
  Market::canonicalize(raw);  // reject anything a solver would reject
  emit(serialize_instance(raw), out_path);
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"exact solvers for markets with sharp multi-unit demand"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_path;
  bool verbose = false;
  bool debug_lp = false;
  app.add_option("-o,--output", out_path, "write the JSON result to this file");
  app.add_flag("--verbose", verbose, "emit JSON trace lines on stderr");
  app.add_flag("--debug-lp", debug_lp, "dump price programs on stderr");

  std::function<int()> action;

  {
    auto* sc = app.add_subcommand("solve-ce", "revenue-maximizing competitive equilibrium");
    auto path = std::make_shared<std::string>();
    sc->add_option("instance", *path, "instance file")->required();
    sc->callback([&, path] {
      action = [&, path] { return cmd_solve_ce(*path, out_path, verbose, debug_lp); };
    });
  }
  {
    auto* sc = app.add_subcommand("solve-ef", "revenue-maximizing envy-free pricing");
    auto path = std::make_shared<std::string>();
    auto delta = std::make_shared<int>(0);
    auto jobs = std::make_shared<int>(1);
    sc->add_option("instance", *path, "instance file")->required();
    sc->add_option("--max-demand", *delta, "demand bound (default: largest demand present)");
    sc->add_option("--jobs", *jobs, "worker threads for the sweep");
    sc->callback([&, path, delta, jobs] {
      action = [&, path, delta, jobs] {
        return cmd_solve_ef(*path, *delta, *jobs, out_path, verbose, debug_lp);
      };
    });
  }
  {
    auto* sc = app.add_subcommand("verify", "certify a solution file against an instance");
    auto inst = std::make_shared<std::string>();
    auto sol = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>();
    sc->add_option("instance", *inst, "instance file")->required();
    sc->add_option("solution", *sol, "solution file")->required();
    sc->add_option("--mode", *mode, "ef or ce")
        ->required()
        ->check(CLI::IsMember({"ef", "ce"}));
    sc->callback([&, inst, sol, mode] {
      action = [&, inst, sol, mode] { return cmd_verify(*inst, *sol, *mode, out_path); };
    });
  }
  {
    auto* sc = app.add_subcommand("oracle", "exhaustive reference solver");
    auto path = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>();
    sc->add_option("instance", *path, "instance file")->required();
    sc->add_option("--mode", *mode, "ef or ce")
        ->required()
        ->check(CLI::IsMember({"ef", "ce"}));
    sc->callback([&, path, mode] {
      action = [&, path, mode] { return cmd_oracle(*path, *mode, out_path); };
    });
  }
  {
    auto* sc = app.add_subcommand("gen-gadget", "build a pricing market from an exact-cover instance");
    auto path = std::make_shared<std::string>();
    auto which = std::make_shared<std::string>();
    auto pad = std::make_shared<bool>(false);
    sc->add_option("x3c", *path, "exact-cover instance file")->required();
    sc->add_option("--which", *which, "ef or ce-general")
        ->required()
        ->check(CLI::IsMember({"ef", "ce-general"}));
    sc->add_flag("--pad", *pad, "pad the instance into the size bounds first");
    sc->callback([&, path, which, pad] {
      action = [&, path, which, pad] { return cmd_gen_gadget(*path, *which, *pad, out_path); };
    });
  }
  {
    auto* sc = app.add_subcommand("gen-random", "deterministic random instance");
    auto buyers = std::make_shared<int>(0);
    auto items = std::make_shared<int>(0);
    auto max_d = std::make_shared<int>(2);
    auto max_v = std::make_shared<int>(8);
    auto seed = std::make_shared<unsigned long long>(1);
    sc->add_option("--buyers", *buyers, "buyer count")->required();
    sc->add_option("--items", *items, "item count")->required();
    sc->add_option("--max-demand", *max_d, "largest demand");
    sc->add_option("--max-value", *max_v, "largest value/quality");
    sc->add_option("--seed", *seed, "generator seed");
    sc->callback([&, buyers, items, max_d, max_v, seed] {
      action = [&, buyers, items, max_d, max_v, seed] {
        return cmd_gen_random(*buyers, *items, *max_d, *max_v, *seed, out_path);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    return action();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const OutcomeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace market
