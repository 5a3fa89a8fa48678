#pragma once

// Value-preserving distributions over simpler instances, as samplers and as
// exhaustive enumerations, plus an exact checker of value preservation.
//
//   identical    p_it = p (or p_t)   -> deterministic rewards on kept arrivals
//   arrival      p_it = p_i * p_t    -> p_it = p_i on kept arrivals
//   budgets      p_it = p_i          -> b-matching, weights r_i p_i, hidden
//                                       budgets k_i ~ truncated geometric
//   correlated   s_i * s_t, S_T      -> p_it = p_i on kept arrivals
//
// Enumerations list only outcomes of positive probability; degenerate coins
// (p in {0, 1}) therefore contribute a single branch.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "stochmatch/algorithms.hpp"
#include "stochmatch/model.hpp"

namespace stochmatch {

// Reduced instance on the kept arrivals T*, in original order.
struct ArrivalSubsetSample {
  StochasticInstance reduced;
  std::vector<std::uint8_t> arrival_bits;  // s_t per original arrival
  std::vector<ArrivalId> kept;             // reduced index -> original index
  double weight = 1.0;
};

// b-matching instance with truncated geometric budgets k_i in 1..m+1.
struct BudgetSample {
  BudgetedInstance reduced;
  std::vector<int> budgets;  // k_i
  double weight = 1.0;
};

// Limit on enumerated outcomes for any reduction.
inline constexpr std::uint64_t kMaxEnumeration = std::uint64_t{1} << 20;

// Identical (or arrival-uniform) probabilities: s_t ~ Bernoulli(p_t).
ArrivalSubsetSample sample_identical(const StochasticInstance& instance,
                                     std::uint64_t seed);
std::vector<ArrivalSubsetSample> enumerate_identical(const StochasticInstance& instance);

// Decomposable probabilities: s_t ~ Bernoulli(p_t) with the factors from
// classify(); kept edges carry p_i.
ArrivalSubsetSample sample_arrival_side(const StochasticInstance& instance,
                                        std::uint64_t seed);
std::vector<ArrivalSubsetSample> enumerate_arrival_side(
    const StochasticInstance& instance);

// Resource-uniform probabilities: k_i is the index of the first success in m
// Bernoulli(p_i) trials, m + 1 if none.
BudgetSample sample_budgets(const StochasticInstance& instance, std::uint64_t seed);
std::vector<BudgetSample> enumerate_budgets(const StochasticInstance& instance);

// P(k_i = k) for k = 1..m+1.
std::vector<double> truncated_geometric(double p, int m);

// Time-correlated rewards: one draw from S_T.
ArrivalSubsetSample sample_correlated(const CorrelatedInstance& instance,
                                      std::uint64_t seed);
std::vector<ArrivalSubsetSample> enumerate_correlated(const CorrelatedInstance& instance);

// Instance restricted to the arrivals with bit 1; kept edges get
// `resource_probs[i]` when given, otherwise 1.
ArrivalSubsetSample restrict_arrivals(const StochasticInstance& instance,
                                      const std::vector<std::uint8_t>& bits,
                                      const std::vector<double>* resource_probs,
                                      double weight);

enum class Reduction { kIdentical, kArrivalSide, kBudgets, kCorrelated };

std::string_view to_string(Reduction reduction);
std::optional<Reduction> parse_reduction(std::string_view text);

// A deterministic policy family that is defined on every instance kind the
// reductions produce: Greedy, or Perturbed Greedy with a fixed y.
struct PolicySpec {
  enum class Kind { kGreedy, kPerturbedGreedy };
  Kind kind = Kind::kGreedy;
  std::vector<double> y;

  static PolicySpec greedy() { return {Kind::kGreedy, {}}; }
  static PolicySpec perturbed(std::vector<double> y) {
    return {Kind::kPerturbedGreedy, std::move(y)};
  }

  PriorityPolicy on(const StochasticInstance& instance) const;
  PriorityPolicy on(const BudgetedInstance& instance) const;
};

struct PreservationCheck {
  double lhs = 0.0;  // exact value on the original instance
  double rhs = 0.0;  // weighted exact values over the enumerated reduction
  double diff = 0.0;
  std::size_t samples = 0;
  double weight_total = 0.0;
};

// lhs: exact_policy_value of the policy on `instance`. rhs: sum over the
// enumerated reduction of weight * exact value of the same policy rule on the
// reduced instance; for the budgets reduction the reduced value is the
// deterministic b-matching reward with weights r_i p_i.
PreservationCheck check_value_preservation(const StochasticInstance& instance,
                                           Reduction reduction,
                                           const PolicySpec& policy);
PreservationCheck check_value_preservation(const CorrelatedInstance& instance,
                                           const PolicySpec& policy);

// Arrival-side reduction followed by the budgets reduction on each sample:
// decomposable -> mixture of b-matching instances.
PreservationCheck check_composed_preservation(const StochasticInstance& instance,
                                              const PolicySpec& policy);

}  // namespace stochmatch
