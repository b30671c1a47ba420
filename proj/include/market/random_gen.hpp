#pragma once

#include <cstdint>

#include "market/market.hpp"

namespace market {

// Deterministic small-instance generator: integer values, qualities and
// demands drawn uniformly from [1, max] with a fixed 64-bit engine, so a
// given seed names the same instance on every platform.
RawInstance random_instance(int buyers, int items, int max_demand, int max_value,
                            std::uint64_t seed);

}  // namespace market
