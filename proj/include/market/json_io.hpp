#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "market/gadgets.hpp"
#include "market/market.hpp"
#include "market/rational.hpp"
#include "market/verify.hpp"

namespace market {

using Json = nlohmann::ordered_json;

// Throws ParseError when the file is missing or not valid JSON.
Json load_json_file(const std::string& path);

// Accepts integer literals and strings ("17", "1.3", "22/7"); any other
// JSON value — notably non-integer number literals — is rejected so no
// quantity ever passes through floating point.
Rational rational_from_json(const Json& v);
Json rational_to_json(const Rational& r);  // canonical string

RawInstance parse_instance(const Json& j);
Json serialize_instance(const RawInstance& raw);

GeneralMarket parse_general(const Json& j);
std::optional<Outcome> parse_general_witness(const Json& j, const GeneralMarket& gm);
Json serialize_general(const GeneralMarket& gm, const std::optional<Outcome>& witness);

X3CInstance parse_x3c(const Json& j);
Json serialize_x3c(const X3CInstance& inst);

// Solution files speak input-order indices; solvers speak canonical ranks.
struct SolutionFile {
  std::string status;  // "equilibrium" | "envy-free" | "no-equilibrium"
  std::string reason;  // only with "no-equilibrium"
  std::optional<Outcome> outcome;  // input-order prices and allocation
  std::optional<Rational> revenue;
};
SolutionFile parse_solution(const Json& j);
Json serialize_solution(const SolutionFile& s);

Outcome outcome_to_input_order(const Market& m, const Outcome& by_rank);
Outcome outcome_to_rank_order(const Market& m, const Outcome& by_input);

}  // namespace market
