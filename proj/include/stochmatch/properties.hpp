#pragma once

// Seeded property batteries over every module, shared by `verify`, the unit
// tests and the acceptance run.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stochmatch/model.hpp"
#include "stochmatch/reductions.hpp"

namespace stochmatch {

struct PropertyResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  std::string detail;
};

using SelectFn = std::function<std::optional<ResourceId>(
    const StochasticInstance&, ArrivalId, std::span<const double>,
    std::span<const std::uint8_t>)>;

// Equal weights and per-arrival equal probabilities: the selection must be
// the available neighbor with the smallest y_i. `measured` counts mismatches.
PropertyResult ranking_property(std::uint64_t seed, const SelectFn& select,
                                int trials = 2000);

// Small random instance of the class a reduction applies to.
StochasticInstance reduction_instance(Reduction reduction, std::uint64_t seed);
CorrelatedInstance correlated_reduction_instance(std::uint64_t seed);

// Greedy plus `count` fixed y vectors of size n drawn from `seed`.
std::vector<PolicySpec> battery_policies(int n, int count, std::uint64_t seed);

struct PreservationBattery {
  double max_diff = 0.0;
  double max_weight_error = 0.0;  // |sum of enumeration weights - 1|
  std::size_t checks = 0;
};

// `instances` instances with n <= 4, m <= 5; Greedy and 5 fixed-y PG policies
// on each.
PreservationBattery preservation_battery(Reduction reduction, int instances,
                                         std::uint64_t seed);
PreservationBattery composition_battery(int instances, std::uint64_t seed);

// Seeded Decomposable instances with n <= 4, m <= 5.
std::vector<StochasticInstance> decomposable_battery(int count, std::uint64_t seed);

std::vector<PropertyResult> property_suite(std::uint64_t seed, int workers = 1);

}  // namespace stochmatch
