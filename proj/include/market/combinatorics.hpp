#pragma once

#include <vector>

#include "market/rational.hpp"

namespace market {

// Lexicographic k-combination stepping over {0, ..., n-1}.  Seed with
// {0, ..., k-1}; returns false once every combination has been produced.
inline bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (int s = i + 1; s < k; ++s) c[s] = c[s - 1] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<int> first_combination(int k) {
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  return c;
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

}  // namespace market
