#include "market/gadgets.hpp"

#include <algorithm>
#include <string>

#include "market/errors.hpp"
#include "market/oracle.hpp"

namespace market {

void validate_x3c(const X3CInstance& inst) {
  if (inst.n < 0) throw ValidationError("ground-set parameter must be non-negative");
  for (std::size_t t = 0; t < inst.triples.size(); ++t) {
    const auto& tr = inst.triples[t];
    for (int e : tr)
      if (e < 0 || e >= 3 * inst.n)
        throw ValidationError("triple " + std::to_string(t) + " leaves the ground set");
    if (tr[0] == tr[1] || tr[0] == tr[2] || tr[1] == tr[2])
      throw ValidationError("triple " + std::to_string(t) + " repeats an element");
  }
}

bool x3c_bounds_ok(const X3CInstance& inst) {
  const int m = static_cast<int>(inst.triples.size());
  return inst.n >= 1 && inst.n <= m && m <= 2 * inst.n - 1;
}

X3CInstance pad_x3c(const X3CInstance& inst) {
  validate_x3c(inst);
  if (inst.n == 0) throw ValidationError("cannot pad an empty ground set");
  X3CInstance out = inst;
  // a fresh dummy triple must be in every cover, so adding it (once or
  // twice) never changes the answer
  while (!x3c_bounds_ok(out)) {
    const int base = 3 * out.n;
    const std::array<int, 3> dummy{base, base + 1, base + 2};
    const int m = static_cast<int>(out.triples.size());
    out.triples.push_back(dummy);
    if (m < out.n) out.triples.push_back(dummy);  // short side: grow triples faster
    out.n += 1;
  }
  return out;
}

EfGadget reduce_x3c_to_ef(const X3CInstance& inst) {
  validate_x3c(inst);
  if (!x3c_bounds_ok(inst))
    throw ValidationError("triple count must lie between n and 2n-1; pad the instance first");
  const int n = inst.n;
  const int m = static_cast<int>(inst.triples.size());

  const BigInt scale = 3 * n * m + 1;
  std::vector<BigInt> weight(3 * n + 1);  // weight[e+1] belongs to ground element e
  weight[0] = 1;
  for (int i = 1; i <= 3 * n; ++i) weight[i] = weight[i - 1] * scale;
  BigInt ground_sum = 0;
  for (int i = 1; i <= 3 * n; ++i) ground_sum += weight[i];

  std::vector<BigInt> r(m);
  for (int t = 0; t < m; ++t)
    for (int e : inst.triples[t]) r[t] += weight[e + 1];
  std::stable_sort(r.begin(), r.end(), [](const BigInt& a, const BigInt& b) { return a > b; });

  EfGadget g;
  g.scale = scale;
  g.ground_sum = ground_sum;
  g.target_revenue = Rational(BigInt(3 * n + 1) * ground_sum);
  g.instance.buyers = {
      Buyer{Rational(3), n},
      Buyer{Rational(3 * n + 1, n + 1), 2 * n},
      Buyer{Rational(2), n},
  };
  g.instance.items.reserve(n + m);
  for (int j = 0; j < n; ++j) g.instance.items.push_back(Item{Rational(ground_sum)});
  for (int t = 0; t < m; ++t) g.instance.items.push_back(Item{Rational(r[t])});
  return g;
}

CeGadget reduce_x3c_to_ce_general(const X3CInstance& inst) {
  validate_x3c(inst);
  const int n = inst.n;
  const int m = static_cast<int>(inst.triples.size());
  const int items = 3 * n + 3;
  const int buyers = m + 9 * n + 1;

  CeGadget g;
  g.market.demands.assign(buyers, 3);
  g.market.valuations.assign(buyers, std::vector<Rational>(items, Rational(0)));
  for (int t = 0; t < m; ++t)
    for (int e : inst.triples[t]) g.market.valuations[t][e] = 1;
  static const int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  int next = m;
  for (int x = 0; x < 3 * n; ++x)
    for (const auto& yz : kPairs) {
      g.market.valuations[next][x] = 1;
      g.market.valuations[next][3 * n + yz[0]] = 1;
      g.market.valuations[next][3 * n + yz[1]] = 1;
      ++next;
    }
  for (int b = 0; b < 3; ++b) g.market.valuations[next][3 * n + b] = 1;

  if (auto cover = x3c_cover(inst)) {
    Outcome w;
    w.prices.assign(items, Price::finite(1));
    w.allocation.assign(buyers, {});
    for (int t : *cover) {
      std::vector<int> bundle(inst.triples[t].begin(), inst.triples[t].end());
      std::sort(bundle.begin(), bundle.end());
      w.allocation[t] = std::move(bundle);
    }
    w.allocation[next] = {3 * n, 3 * n + 1, 3 * n + 2};
    g.witness = std::move(w);
  }
  return g;
}

}  // namespace market
