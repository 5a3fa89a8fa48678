#pragma once

// Named instance families and seeded random families.

#include <cstdint>
#include <optional>

#include "stochmatch/model.hpp"

namespace stochmatch {

inline constexpr double kHardEps = 0.133;

// w(t) = (1 - e^{t/(n+1) - 1}) / (1 - e^{-1 + eps}) for t = 1..n.
double hard_weight(int t, int n, double eps);

struct HardInstanceParams {
  int n = 1;
  double eps = kHardEps;
  std::optional<double> p;  // defaults to 1/n^2

  double edge_scale() const { return p.value_or(1.0 / (static_cast<double>(n) * n)); }
};

// Arrival t (0-based) adjacent to resources t..n-1; unit weights, p = 1.
StochasticInstance gen_kvv_triangular(int n);

// n unit-weight resources with p = 1 edges to all 2n arrivals, plus resource
// n of weight 1/p with edges to arrivals 0..n-1 of probability p * w(t + 1).
// Throws std::invalid_argument unless eps in (0,1) and p * w(1) < 1.
StochasticInstance gen_hard_stochastic(const HardInstanceParams& params);

// Adwords counterpart with hidden budgets: resources 0..n-1 have budget 1 and
// bid 1 on all 2n arrivals; resource n has budget sum_t w(t) and bids w(t)
// on arrivals 0..n-1 only.
BudgetedInstance gen_hard_adwords(int n, double eps = kHardEps);

// One arrival adjacent to n unit-weight resources, each with p = 1/n.
StochasticInstance gen_omniscient_separator(int n);

// Value an omniscient benchmark gets on gen_omniscient_separator(n).
double omniscient_separator_value(int n);

struct RandomFamily {
  int n = 3;
  int m = 4;
  double density = 1.0;
  ProbClass prob_class = ProbClass::kGeneral;
  double weight_lo = 0.5;
  double weight_hi = 2.0;
};

// Draw order from the seeded stream: n weights, then the class's factor
// draws (one shared p, or one per arrival / per resource / both), then for
// each arrival in order and each resource in order an inclusion uniform,
// followed by the edge's own probability for the General class.
StochasticInstance gen_random(const RandomFamily& family, std::uint64_t seed);

// Time-correlated random instance: the graph as gen_random with resource
// probabilities p_i, then `support_size` atoms with i.i.d. fair bits and
// normalized positive weights.
CorrelatedInstance gen_random_correlated(const RandomFamily& family,
                                         int support_size, std::uint64_t seed);

}  // namespace stochmatch
