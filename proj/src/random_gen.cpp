#include "market/random_gen.hpp"

#include <random>

#include "market/errors.hpp"

namespace market {

RawInstance random_instance(int buyers, int items, int max_demand, int max_value,
                            std::uint64_t seed) {
  if (buyers < 0 || items < 0) throw ValidationError("counts must be non-negative");
  if (max_demand < 1 || max_value < 1) throw ValidationError("bounds must be at least 1");
  std::mt19937_64 rng(seed);
  auto draw = [&](int hi) { return 1 + static_cast<int>(rng() % hi); };
  RawInstance raw;
  raw.buyers.reserve(buyers);
  for (int i = 0; i < buyers; ++i) {
    Buyer b;
    b.value = draw(max_value);
    b.demand = draw(max_demand);
    raw.buyers.push_back(std::move(b));
  }
  raw.items.reserve(items);
  for (int j = 0; j < items; ++j) raw.items.push_back(Item{Rational(draw(max_value))});
  return raw;
}

}  // namespace market
