#pragma once

// Online algorithms: Perturbed Greedy for stochastic rewards, the greedy
// baseline, and Perturbed Greedy for b-matching and Adwords with hidden
// budgets. Every algorithm is a priority rule: at each arrival pick the usable
// neighbor with the largest positive score, ties to the smaller resource id.

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stochmatch/model.hpp"
#include "stochmatch/random.hpp"

namespace stochmatch {

// Perturbation applied to resource i's score: 1 - e^{y_i - 1}.
inline double perturbation(double y) { return 1.0 - std::exp(y - 1.0); }

// Perturbed expected reward p * r * (1 - e^{y-1}).
inline double pg_score(double prob, double weight, double y) {
  return prob * weight * perturbation(y);
}

// One y_i ~ U[0,1] per resource, drawn once per replication.
struct PerturbationVector {
  std::vector<double> y;

  static PerturbationVector draw(int num_resources, Rng& rng);
};

// Usability flags per resource, as observed by the online algorithm: in the
// stochastic setting "not yet successfully matched", in budgeted settings
// "not yet exhausted". Budgets themselves are never exposed.
using Availability = std::vector<std::uint8_t>;

class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;

  // Resource offered to `arrival`, or nullopt to leave it unmatched. Must be
  // a pure function of its arguments.
  virtual std::optional<ResourceId> select(
      ArrivalId arrival, std::span<const std::uint8_t> available) const = 0;
};

// Static per-edge coefficients of a priority rule: p_it * r_i for stochastic
// instances, b_it for budgeted ones.
struct EdgeCoefficients {
  struct Entry {
    ResourceId resource;
    double coeff;
  };
  std::vector<std::vector<Entry>> by_arrival;

  static std::shared_ptr<const EdgeCoefficients> expected_reward(
      const StochasticInstance& instance);
  static std::shared_ptr<const EdgeCoefficients> bids(
      const BudgetedInstance& instance);
};

// score(i, t) = coeff(i, t) * multiplier[i]; empty multipliers mean 1.
class PriorityPolicy final : public OnlinePolicy {
 public:
  PriorityPolicy(std::shared_ptr<const EdgeCoefficients> coeffs,
                 std::vector<double> multipliers = {});

  std::optional<ResourceId> select(
      ArrivalId arrival, std::span<const std::uint8_t> available) const override;

  double score(ArrivalId arrival, std::size_t edge_index) const;

 private:
  std::shared_ptr<const EdgeCoefficients> coeffs_;
  std::vector<double> multipliers_;
};

std::vector<double> perturbation_multipliers(std::span<const double> y);

// Policy factories. The same rule applied to a reduced instance makes the
// decisions the reductions' coupling arguments rely on.
PriorityPolicy greedy_policy(const StochasticInstance& instance);
PriorityPolicy perturbed_greedy_policy(const StochasticInstance& instance,
                                       std::span<const double> y);
PriorityPolicy greedy_policy(const BudgetedInstance& instance);
PriorityPolicy perturbed_greedy_policy(const BudgetedInstance& instance,
                                       std::span<const double> y);

// Argmax of p_it * r_i * (1 - e^{y_i - 1}) over available neighbors; nullopt
// when there is none or the best score is 0.
std::optional<ResourceId> pg_select(const StochasticInstance& instance,
                                    ArrivalId arrival, std::span<const double> y,
                                    std::span<const std::uint8_t> available);

struct MatchEvent {
  ArrivalId arrival = 0;
  ResourceId resource = 0;
  bool success = false;
  double realized = 0.0;         // reward actually earned
  double expected_credit = 0.0;  // r_i * p_it (Y_it accounting)

  bool operator==(const MatchEvent&) const = default;
};

struct RunTrace {
  std::vector<MatchEvent> events;
  double realized_total = 0.0;
  double expected_total = 0.0;

  std::vector<std::uint8_t> outcome_bits() const;

  bool operator==(const RunTrace&) const = default;
};

// Supplies the success bit of each attempted edge.
class OutcomeSource {
 public:
  virtual ~OutcomeSource() = default;
  virtual bool draw(ResourceId resource, ArrivalId arrival, double prob) = 0;
};

// Independent Bernoulli(p_it) per attempt.
class BernoulliOutcomes final : public OutcomeSource {
 public:
  explicit BernoulliOutcomes(Rng& rng) : rng_(&rng) {}
  bool draw(ResourceId, ArrivalId, double prob) override {
    return rng_->bernoulli(prob);
  }

 private:
  Rng* rng_;
};

// Replays recorded bits in attempt order; throws when exhausted.
class ReplayOutcomes final : public OutcomeSource {
 public:
  explicit ReplayOutcomes(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}
  bool draw(ResourceId, ArrivalId, double) override;

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t next_ = 0;
};

// Runs `policy` over the arrivals in order. On success the resource leaves
// the available set. `credit_scale`, when non-empty, multiplies the
// expected-reward credit per arrival (used for correlated arrivals).
RunTrace run_policy(const StochasticInstance& instance,
                    const OnlinePolicy& policy, OutcomeSource& outcomes,
                    std::span<const double> credit_scale = {});

// Draws y, then per-attempt success bits, from the stream seeded by `seed`.
RunTrace run_perturbed_greedy(const StochasticInstance& instance,
                              std::uint64_t seed);
RunTrace run_greedy(const StochasticInstance& instance, std::uint64_t seed);

// Deterministic budgeted run. b-matching: a resource stays usable while
// matched fewer than b_i times and earns r_i per match. Adwords: usable while
// remaining budget > 0; a match earns and consumes min(remaining, bid).
RunTrace run_budgeted(const BudgetedInstance& instance,
                      const OnlinePolicy& policy);

RunTrace run_pg_bmatching(const BudgetedInstance& instance, std::uint64_t seed);
RunTrace run_pg_adwords(const BudgetedInstance& instance, std::uint64_t seed);

// Outcome source for the time-correlated model: success iff the arrival bit
// of the drawn atom is set and a fresh Bernoulli(p_i) succeeds.
class CorrelatedOutcomes final : public OutcomeSource {
 public:
  CorrelatedOutcomes(const CorrelatedInstance& instance,
                     const std::vector<std::uint8_t>& arrival_bits, Rng& rng)
      : instance_(&instance), bits_(&arrival_bits), rng_(&rng) {}
  bool draw(ResourceId resource, ArrivalId arrival, double prob) override;

 private:
  const CorrelatedInstance* instance_;
  const std::vector<std::uint8_t>* bits_;
  Rng* rng_;
};

// Index of the atom selected by uniform `u` (inverse CDF over the support).
std::size_t pick_atom(const CorrelatedInstance& instance, double u);

// Perturbed Greedy on a time-correlated instance. Scores use p_it = p_i;
// the expected-reward credit is r_i * p_i * s_t for the drawn atom, which
// the simulator knows and the algorithm does not.
RunTrace run_on_correlated(const CorrelatedInstance& instance,
                           std::uint64_t seed);

enum class AlgorithmId { kPerturbedGreedy, kGreedy, kPgBMatching, kPgAdwords, kPgCorrelated };

std::string_view to_string(AlgorithmId id);
std::optional<AlgorithmId> parse_algorithm(std::string_view text);

}  // namespace stochmatch
