#include "stochmatch/assignment.hpp"

#include <algorithm>
#include <limits>

namespace stochmatch {

double max_weight_assignment(const std::vector<std::vector<double>>& weight) {
  const std::size_t rows = weight.size();
  std::size_t cols = 0;
  for (const auto& row : weight) cols = std::max(cols, row.size());
  const std::size_t k = std::max(rows, cols);
  if (k == 0) return 0.0;

  // Square cost matrix (1-based, potentials form) minimizing -weight.
  auto cost = [&](std::size_t r, std::size_t c) -> double {
    if (r > rows || c > weight[r - 1].size()) return 0.0;
    return -weight[r - 1][c - 1];
  };
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
  std::vector<std::size_t> match(k + 1, 0), way(k + 1, 0);
  for (std::size_t r = 1; r <= k; ++r) {
    match[0] = r;
    std::size_t c0 = 0;
    std::vector<double> minv(k + 1, kInf);
    std::vector<char> used(k + 1, 0);
    do {
      used[c0] = 1;
      const std::size_t r0 = match[c0];
      double delta = kInf;
      std::size_t c1 = 0;
      for (std::size_t c = 1; c <= k; ++c) {
        if (used[c]) continue;
        const double cur = cost(r0, c) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = c0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          c1 = c;
        }
      }
      for (std::size_t c = 0; c <= k; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      c0 = c1;
    } while (match[c0] != 0);
    do {
      const std::size_t c1 = way[c0];
      match[c0] = match[c1];
      c0 = c1;
    } while (c0 != 0);
  }
  double total = 0.0;
  for (std::size_t c = 1; c <= k; ++c) total -= cost(match[c], c);
  return total;
}

}  // namespace stochmatch
