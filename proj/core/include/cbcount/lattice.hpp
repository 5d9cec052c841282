#pragma once

// Small dense integer linear algebra: unimodular completion of a set of
// integer vectors via row-style Hermite reduction.

#include <vector>

#include "cbcount/arith.hpp"

namespace cbcount {

using IntMatrix = std::vector<std::vector<Int>>;

IntMatrix identity_matrix(std::size_t dim);

struct UnimodularCompletion {
  /// dim x dim integer matrix with det +-1 whose first `rank` columns span
  /// (Q-span of the input vectors) intersected with Z^dim.
  IntMatrix basis;
  /// Inverse of `basis` (also integral).
  IntMatrix inverse;
  unsigned rank = 0;
};

/// vectors: k integer vectors of length dim (k <= dim).
UnimodularCompletion unimodular_completion(const std::vector<std::vector<Int>>& vectors, std::size_t dim);

/// Extended gcd: returns g = gcd(a, b) >= 0 and sets x, y with a*x + b*y = g.
Int extended_gcd(const Int& a, const Int& b, Int& x, Int& y);

}  // namespace cbcount
