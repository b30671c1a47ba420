#include "market/json_io.hpp"

#include <algorithm>
#include <fstream>

#include "market/errors.hpp"

namespace market {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing required key \"") + key + "\"");
  return j.at(key);
}

int int_from_json(const Json& v, const char* what) {
  if (!v.is_number_integer())
    throw ParseError(std::string(what) + " must be an integer");
  const auto raw = v.get<long long>();
  if (raw < -(1ll << 31) || raw > (1ll << 31))
    throw ParseError(std::string(what) + " is out of range");
  return static_cast<int>(raw);
}

Json price_to_json(const Price& p) {
  if (p.is_infinite()) return Json("inf");
  return rational_to_json(p.amount());
}

Price price_from_json(const Json& v) {
  if (v.is_string() && v.get<std::string>() == "inf") return Price::infinite();
  return Price::finite(rational_from_json(v));
}

std::vector<std::vector<int>> allocation_from_json(const Json& v) {
  if (!v.is_array()) throw ParseError("allocation must be a list of bundles");
  std::vector<std::vector<int>> out;
  out.reserve(v.size());
  for (const auto& bundle : v) {
    if (!bundle.is_array()) throw ParseError("each bundle must be a list of item indices");
    std::vector<int> b;
    b.reserve(bundle.size());
    for (const auto& e : bundle) b.push_back(int_from_json(e, "item index"));
    out.push_back(std::move(b));
  }
  return out;
}

Json allocation_to_json(const std::vector<std::vector<int>>& alloc) {
  Json out = Json::array();
  for (const auto& b : alloc) out.push_back(b);
  return out;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ParseError(path + " is not valid JSON");
  return j;
}

Rational rational_from_json(const Json& v) {
  if (v.is_number_integer()) {
    return Rational(v.get<long long>());
  }
  if (v.is_number()) throw ParseError("non-integer numbers must be quoted strings");
  if (v.is_string()) return parse_rational(v.get<std::string>());
  throw ParseError("expected a rational (integer or string)");
}

Json rational_to_json(const Rational& r) { return Json(format_rational(r)); }

RawInstance parse_instance(const Json& j) {
  RawInstance raw;
  const Json& buyers = require(j, "buyers");
  if (!buyers.is_array()) throw ParseError("\"buyers\" must be a list");
  for (const auto& b : buyers) {
    Buyer buyer;
    buyer.value = rational_from_json(require(b, "value"));
    buyer.demand = int_from_json(require(b, "demand"), "demand");
    raw.buyers.push_back(std::move(buyer));
  }
  const Json& items = require(j, "items");
  if (!items.is_array()) throw ParseError("\"items\" must be a list");
  for (const auto& it : items) raw.items.push_back(Item{rational_from_json(require(it, "quality"))});
  return raw;
}

Json serialize_instance(const RawInstance& raw) {
  Json j;
  j["buyers"] = Json::array();
  for (const auto& b : raw.buyers) {
    Json e;
    e["value"] = rational_to_json(b.value);
    e["demand"] = b.demand;
    j["buyers"].push_back(std::move(e));
  }
  j["items"] = Json::array();
  for (const auto& it : raw.items) {
    Json e;
    e["quality"] = rational_to_json(it.quality);
    j["items"].push_back(std::move(e));
  }
  return j;
}

GeneralMarket parse_general(const Json& j) {
  GeneralMarket gm;
  const Json& demands = require(j, "demands");
  if (!demands.is_array()) throw ParseError("\"demands\" must be a list");
  for (const auto& d : demands) {
    const int v = int_from_json(d, "demand");
    if (v < 1) throw ParseError("demands must be at least 1");
    gm.demands.push_back(v);
  }
  const Json& vals = require(j, "valuations");
  if (!vals.is_array()) throw ParseError("\"valuations\" must be a list of rows");
  std::size_t cols = 0;
  for (const auto& row : vals) {
    if (!row.is_array()) throw ParseError("each valuation row must be a list");
    std::vector<Rational> r;
    for (const auto& v : row) {
      Rational x = rational_from_json(v);
      if (x < 0) throw ParseError("valuations must be non-negative");
      r.push_back(std::move(x));
    }
    if (gm.valuations.empty())
      cols = r.size();
    else if (r.size() != cols)
      throw ParseError("valuation rows must all have the same length");
    gm.valuations.push_back(std::move(r));
  }
  if (gm.valuations.size() != gm.demands.size())
    throw ParseError("one demand per valuation row is required");
  return gm;
}

std::optional<Outcome> parse_general_witness(const Json& j, const GeneralMarket& gm) {
  if (!j.is_object() || !j.contains("witness")) return std::nullopt;
  const Json& w = j.at("witness");
  Outcome out;
  const Json& prices = require(w, "prices");
  if (!prices.is_array()) throw ParseError("witness \"prices\" must be a list");
  for (const auto& p : prices) out.prices.push_back(price_from_json(p));
  out.allocation = allocation_from_json(require(w, "allocation"));
  auto view = ValuationView::general(gm);
  view.check_outcome_shape(out);
  return out;
}

Json serialize_general(const GeneralMarket& gm, const std::optional<Outcome>& witness) {
  Json j;
  j["demands"] = gm.demands;
  j["valuations"] = Json::array();
  for (const auto& row : gm.valuations) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(rational_to_json(v));
    j["valuations"].push_back(std::move(r));
  }
  if (witness) {
    Json w;
    w["prices"] = Json::array();
    for (const auto& p : witness->prices) w["prices"].push_back(price_to_json(p));
    w["allocation"] = allocation_to_json(witness->allocation);
    j["witness"] = std::move(w);
  }
  return j;
}

X3CInstance parse_x3c(const Json& j) {
  X3CInstance inst;
  inst.n = int_from_json(require(j, "n"), "n");
  const Json& triples = require(j, "triples");
  if (!triples.is_array()) throw ParseError("\"triples\" must be a list");
  for (const auto& t : triples) {
    if (!t.is_array() || t.size() != 3)
      throw ParseError("each triple must hold exactly three elements");
    std::array<int, 3> tr;
    for (int x = 0; x < 3; ++x) tr[x] = int_from_json(t.at(x), "triple element");
    inst.triples.push_back(tr);
  }
  validate_x3c(inst);
  return inst;
}

Json serialize_x3c(const X3CInstance& inst) {
  Json j;
  j["n"] = inst.n;
  j["triples"] = Json::array();
  for (const auto& t : inst.triples) j["triples"].push_back(std::vector<int>(t.begin(), t.end()));
  return j;
}

SolutionFile parse_solution(const Json& j) {
  SolutionFile s;
  const Json& status = require(j, "status");
  if (!status.is_string()) throw ParseError("\"status\" must be a string");
  s.status = status.get<std::string>();
  if (s.status != "equilibrium" && s.status != "envy-free" && s.status != "no-equilibrium")
    throw ParseError("unknown status \"" + s.status + "\"");
  if (j.contains("reason")) {
    if (!j.at("reason").is_string()) throw ParseError("\"reason\" must be a string");
    s.reason = j.at("reason").get<std::string>();
  }
  if (j.contains("prices") || j.contains("allocation")) {
    Outcome out;
    const Json& prices = require(j, "prices");
    if (!prices.is_array()) throw ParseError("\"prices\" must be a list");
    for (const auto& p : prices) out.prices.push_back(price_from_json(p));
    out.allocation = allocation_from_json(require(j, "allocation"));
    s.outcome = std::move(out);
  }
  if (j.contains("revenue")) s.revenue = rational_from_json(j.at("revenue"));
  return s;
}

Json serialize_solution(const SolutionFile& s) {
  Json j;
  j["status"] = s.status;
  if (!s.reason.empty()) j["reason"] = s.reason;
  if (s.outcome) {
    j["prices"] = Json::array();
    for (const auto& p : s.outcome->prices) j["prices"].push_back(price_to_json(p));
    j["allocation"] = allocation_to_json(s.outcome->allocation);
  }
  if (s.revenue) j["revenue"] = rational_to_json(*s.revenue);
  return j;
}

namespace {

void check_mapping_shape(const Market& m, const Outcome& o) {
  if (static_cast<int>(o.prices.size()) != m.item_count())
    throw OutcomeError("price list length does not match item count");
  if (static_cast<int>(o.allocation.size()) != m.buyer_count())
    throw OutcomeError("allocation length does not match buyer count");
  for (const auto& bundle : o.allocation)
    for (int j : bundle)
      if (j < 0 || j >= m.item_count()) throw OutcomeError("allocated item index out of range");
}

}  // namespace

Outcome outcome_to_input_order(const Market& m, const Outcome& by_rank) {
  check_mapping_shape(m, by_rank);
  Outcome out;
  out.prices.resize(m.item_count(), Price::infinite());
  for (int pos = 0; pos < m.item_count(); ++pos)
    out.prices[pos] = by_rank.prices[m.item_rank_at_input(pos)];
  out.allocation.resize(m.buyer_count());
  for (int pos = 0; pos < m.buyer_count(); ++pos) {
    std::vector<int> bundle;
    for (int rank : by_rank.allocation[m.buyer_rank_at_input(pos)])
      bundle.push_back(m.item_input_position(rank));
    std::sort(bundle.begin(), bundle.end());
    out.allocation[pos] = std::move(bundle);
  }
  return out;
}

Outcome outcome_to_rank_order(const Market& m, const Outcome& by_input) {
  check_mapping_shape(m, by_input);
  Outcome out;
  out.prices.resize(m.item_count(), Price::infinite());
  for (int rank = 0; rank < m.item_count(); ++rank)
    out.prices[rank] = by_input.prices[m.item_input_position(rank)];
  out.allocation.resize(m.buyer_count());
  for (int rank = 0; rank < m.buyer_count(); ++rank) {
    std::vector<int> bundle;
    for (int pos : by_input.allocation[m.buyer_input_position(rank)])
      bundle.push_back(m.item_rank_at_input(pos));
    std::sort(bundle.begin(), bundle.end());
    out.allocation[rank] = std::move(bundle);
  }
  return out;
}

}  // namespace market
