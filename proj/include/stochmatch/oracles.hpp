#pragma once

// Exact offline benchmarks and exact evaluation of deterministic
// non-anticipative online policies.

#include <cstdint>
#include <vector>

#include "stochmatch/algorithms.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/model.hpp"

namespace stochmatch {

// Limits of the bitmask expectimax.
inline constexpr int kMaxDpSide = 20;
inline constexpr int kMaxDpTotal = 24;
// Limit on outcome branches explored by exact policy evaluation.
inline constexpr std::uint64_t kMaxPolicyBranches = std::uint64_t{1} << 20;
// Limit on the side length of the dense assignment problems.
inline constexpr int kMaxAssignmentSize = 2000;

// Optimal expected reward of the non-anticipative offline benchmark: it may
// attempt any unattempted arrival on any available resource, in any order,
// observe the outcome, and adapt; each arrival is attempted at most once and
// a failed attempt loses the arrival but not the resource.
// Throws GuardError unless n, m <= 20 and n + m <= 24.
double opt_nonanticipative(const StochasticInstance& instance);

// Maximum-weight matching value of a deterministic instance (all p = 1).
// Throws std::invalid_argument on other instances.
double opt_deterministic_matching(const StochasticInstance& instance);

// Offline b-matching optimum with known budgets: each arrival to at most one
// resource, resource i to at most b_i arrivals, r_i per match.
double opt_bmatching(const BudgetedInstance& instance);

// Offline optimum n + sum_t w(t) of the hard Adwords family.
double opt_adwords_hard(int n, double eps);

struct PolicyValue {
  double realized = 0.0;  // E[sum r_i X_it]
  double expected = 0.0;  // E[sum r_i p_it Y_it]
};

// Exact expectation of a deterministic policy by branching on the outcome of
// each attempted edge. Zero-probability branches are pruned. Throws
// GuardError past kMaxPolicyBranches leaves and std::invalid_argument if the
// policy answers the same query differently.
PolicyValue exact_policy_value(const StochasticInstance& instance,
                               const OnlinePolicy& policy);

// Correlated variant: outer sum over the support of the arrival
// distribution, inner branching on fresh resource bits. The expected-reward
// credit of an attempt is r_i * p_i * s_t under the drawn atom.
PolicyValue exact_policy_value(const CorrelatedInstance& instance,
                               const OnlinePolicy& policy);

enum class PgValueMode { kPermutations, kQuadrature };

inline constexpr int kMaxPermutationResources = 8;
inline constexpr int kMaxQuadratureResources = 4;
inline constexpr int kDefaultQuadraturePoints = 64;

// Expectation of Perturbed Greedy over y ~ U[0,1]^n.
//
// kPermutations is exact but needs equal weights and, per arrival, equal
// probabilities, so that decisions depend only on the rank order of y;
// it averages over all n! orderings (n <= 8).
//
// kQuadrature applies the midpoint rule with `grid_points` nodes per
// dimension (n <= 4). Grid points are grouped by the per-arrival preference
// orders they induce, each distinct order set is evaluated once, and the
// weighted sum is taken in a fixed order. `workers` > 1 runs the grid scan
// with OpenMP; the result is bit-identical to the serial scan.
double exact_pg_value(const StochasticInstance& instance, PgValueMode mode,
                      int grid_points = kDefaultQuadraturePoints,
                      int workers = 1);

// Policy that walks a fixed per-arrival preference list and offers the first
// available entry.
class RankedPolicy final : public OnlinePolicy {
 public:
  explicit RankedPolicy(std::vector<std::vector<ResourceId>> preferences)
      : preferences_(std::move(preferences)) {}

  std::optional<ResourceId> select(
      ArrivalId arrival, std::span<const std::uint8_t> available) const override;

 private:
  std::vector<std::vector<ResourceId>> preferences_;
};

}  // namespace stochmatch
