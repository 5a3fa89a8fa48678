#pragma once

#include <vector>

namespace stochmatch {

// Maximum total weight of a matching in a dense bipartite weight matrix
// (rows x cols, any shape, entries >= 0; a zero entry is as good as leaving
// the pair unmatched). Hungarian method, O(k^3) for k = max(rows, cols).
double max_weight_assignment(const std::vector<std::vector<double>>& weight);

}  // namespace stochmatch
