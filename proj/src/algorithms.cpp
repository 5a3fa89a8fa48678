#include "stochmatch/algorithms.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stochmatch {

PerturbationVector PerturbationVector::draw(int num_resources, Rng& rng) {
  PerturbationVector out;
  out.y.resize(num_resources);
  for (double& v : out.y) v = rng.uniform();
  return out;
}

std::shared_ptr<const EdgeCoefficients> EdgeCoefficients::expected_reward(
    const StochasticInstance& instance) {
  auto out = std::make_shared<EdgeCoefficients>();
  out->by_arrival.resize(instance.arrivals.size());
  for (std::size_t t = 0; t < instance.arrivals.size(); ++t) {
    auto& row = out->by_arrival[t];
    row.reserve(instance.arrivals[t].size());
    for (const Edge& e : instance.arrivals[t]) {
      row.push_back({e.resource, e.prob * instance.weights[e.resource]});
    }
  }
  return out;
}

std::shared_ptr<const EdgeCoefficients> EdgeCoefficients::bids(
    const BudgetedInstance& instance) {
  auto out = std::make_shared<EdgeCoefficients>();
  out->by_arrival.resize(instance.arrivals.size());
  for (std::size_t t = 0; t < instance.arrivals.size(); ++t) {
    auto& row = out->by_arrival[t];
    row.reserve(instance.arrivals[t].size());
    for (const Bid& b : instance.arrivals[t]) row.push_back({b.resource, b.amount});
  }
  return out;
}

PriorityPolicy::PriorityPolicy(std::shared_ptr<const EdgeCoefficients> coeffs,
                               std::vector<double> multipliers)
    : coeffs_(std::move(coeffs)), multipliers_(std::move(multipliers)) {}

double PriorityPolicy::score(ArrivalId arrival, std::size_t edge_index) const {
  const auto& entry = coeffs_->by_arrival[arrival][edge_index];
  return multipliers_.empty() ? entry.coeff
                              : entry.coeff * multipliers_[entry.resource];
}

std::optional<ResourceId> PriorityPolicy::select(
    ArrivalId arrival, std::span<const std::uint8_t> available) const {
  const auto& row = coeffs_->by_arrival[arrival];
  std::optional<ResourceId> best;
  double best_score = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    if (!available[row[k].resource]) continue;
    const double s = score(arrival, k);
    // Strict comparison: zero scores never win and ties keep the smaller id.
    if (s > best_score) {
      best_score = s;
      best = row[k].resource;
    }
  }
  return best;
}

std::vector<double> perturbation_multipliers(std::span<const double> y) {
  std::vector<double> out(y.size());
  std::transform(y.begin(), y.end(), out.begin(), perturbation);
  return out;
}

PriorityPolicy greedy_policy(const StochasticInstance& instance) {
  return PriorityPolicy(EdgeCoefficients::expected_reward(instance));
}

PriorityPolicy perturbed_greedy_policy(const StochasticInstance& instance,
                                       std::span<const double> y) {
  if (static_cast<int>(y.size()) != instance.num_resources()) {
    throw std::invalid_argument("perturbation vector size differs from resource count");
  }
  return PriorityPolicy(EdgeCoefficients::expected_reward(instance),
                        perturbation_multipliers(y));
}

PriorityPolicy greedy_policy(const BudgetedInstance& instance) {
  return PriorityPolicy(EdgeCoefficients::bids(instance));
}

PriorityPolicy perturbed_greedy_policy(const BudgetedInstance& instance,
                                       std::span<const double> y) {
  if (static_cast<int>(y.size()) != instance.num_resources()) {
    throw std::invalid_argument("perturbation vector size differs from resource count");
  }
  return PriorityPolicy(EdgeCoefficients::bids(instance),
                        perturbation_multipliers(y));
}

std::optional<ResourceId> pg_select(const StochasticInstance& instance,
                                    ArrivalId arrival, std::span<const double> y,
                                    std::span<const std::uint8_t> available) {
  std::optional<ResourceId> best;
  double best_score = 0.0;
  for (const Edge& e : instance.arrivals[arrival]) {
    if (!available[e.resource]) continue;
    const double s = pg_score(e.prob, instance.weights[e.resource], y[e.resource]);
    if (s > best_score) {
      best_score = s;
      best = e.resource;
    }
  }
  return best;
}

std::vector<std::uint8_t> RunTrace::outcome_bits() const {
  std::vector<std::uint8_t> bits;
  bits.reserve(events.size());
  for (const MatchEvent& e : events) bits.push_back(e.success ? 1 : 0);
  return bits;
}

bool ReplayOutcomes::draw(ResourceId, ArrivalId, double) {
  if (next_ >= bits_.size()) {
    throw std::out_of_range("replay: more attempts than recorded outcomes");
  }
  return bits_[next_++] != 0;
}

RunTrace run_policy(const StochasticInstance& instance,
                    const OnlinePolicy& policy, OutcomeSource& outcomes,
                    std::span<const double> credit_scale) {
  RunTrace trace;
  Availability available(instance.num_resources(), 1);
  for (ArrivalId t = 0; t < instance.num_arrivals(); ++t) {
    const auto choice = policy.select(t, available);
    if (!choice) continue;
    const ResourceId i = *choice;
    const auto prob = instance.prob(i, t);
    if (!prob) {
      throw std::logic_error("policy selected a non-neighbor for arrival " +
                             std::to_string(t));
    }
    const bool success = outcomes.draw(i, t, *prob);
    const double weight = instance.weights[i];
    MatchEvent event{t, i, success, success ? weight : 0.0, weight * *prob};
    if (!credit_scale.empty()) event.expected_credit *= credit_scale[t];
    trace.realized_total += event.realized;
    trace.expected_total += event.expected_credit;
    trace.events.push_back(event);
    if (success) available[i] = 0;
  }
  return trace;
}

RunTrace run_perturbed_greedy(const StochasticInstance& instance,
                              std::uint64_t seed) {
  Rng rng(seed);
  const auto y = PerturbationVector::draw(instance.num_resources(), rng);
  BernoulliOutcomes outcomes(rng);
  return run_policy(instance, perturbed_greedy_policy(instance, y.y), outcomes);
}

RunTrace run_greedy(const StochasticInstance& instance, std::uint64_t seed) {
  Rng rng(seed);
  BernoulliOutcomes outcomes(rng);
  return run_policy(instance, greedy_policy(instance), outcomes);
}

RunTrace run_budgeted(const BudgetedInstance& instance,
                      const OnlinePolicy& policy) {
  const int n = instance.num_resources();
  const bool bmatching = instance.kind == BudgetKind::kBMatching;
  RunTrace trace;
  std::vector<double> remaining = instance.budgets;  // matches left or budget left
  Availability available(n);
  for (int i = 0; i < n; ++i) available[i] = remaining[i] > 0.0 ? 1 : 0;

  for (ArrivalId t = 0; t < instance.num_arrivals(); ++t) {
    const auto choice = policy.select(t, available);
    if (!choice) continue;
    const ResourceId i = *choice;
    const auto& adj = instance.arrivals[t];
    auto it = std::find_if(adj.begin(), adj.end(),
                           [i](const Bid& b) { return b.resource == i; });
    if (it == adj.end()) {
      throw std::logic_error("policy selected a non-neighbor for arrival " +
                             std::to_string(t));
    }
    double reward;
    if (bmatching) {
      reward = instance.weights[i];
      remaining[i] -= 1.0;
    } else if (it->amount >= remaining[i]) {
      reward = remaining[i];
      remaining[i] = 0.0;
    } else {
      reward = it->amount;
      remaining[i] -= it->amount;
    }
    if (remaining[i] <= 0.0) available[i] = 0;
    trace.events.push_back({t, i, true, reward, reward});
    trace.realized_total += reward;
    trace.expected_total += reward;
  }
  return trace;
}

RunTrace run_pg_bmatching(const BudgetedInstance& instance, std::uint64_t seed) {
  if (instance.kind != BudgetKind::kBMatching) {
    throw std::invalid_argument("pg-bmatch requires a b-matching instance");
  }
  Rng rng(seed);
  const auto y = PerturbationVector::draw(instance.num_resources(), rng);
  return run_budgeted(instance, perturbed_greedy_policy(instance, y.y));
}

RunTrace run_pg_adwords(const BudgetedInstance& instance, std::uint64_t seed) {
  if (instance.kind != BudgetKind::kAdwords) {
    throw std::invalid_argument("pg-adwords requires an Adwords instance");
  }
  Rng rng(seed);
  const auto y = PerturbationVector::draw(instance.num_resources(), rng);
  return run_budgeted(instance, perturbed_greedy_policy(instance, y.y));
}

bool CorrelatedOutcomes::draw(ResourceId resource, ArrivalId arrival, double) {
  // The resource bit is always drawn so the stream position does not depend
  // on the arrival bit.
  const bool resource_bit = rng_->bernoulli(instance_->resource_probs[resource]);
  return resource_bit && (*bits_)[arrival] != 0;
}

std::size_t pick_atom(const CorrelatedInstance& instance, double u) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < instance.support.size(); ++k) {
    if (instance.support[k].prob <= 0.0) continue;
    cumulative += instance.support[k].prob;
    last_positive = k;
    if (u < cumulative) return k;
  }
  return last_positive;
}

RunTrace run_on_correlated(const CorrelatedInstance& instance,
                           std::uint64_t seed) {
  Rng rng(seed);
  const auto y = PerturbationVector::draw(instance.graph.num_resources(), rng);
  const std::size_t atom = pick_atom(instance, rng.uniform());
  CorrelatedOutcomes outcomes(instance, instance.support[atom].bits, rng);
  const auto& bits = instance.support[atom].bits;
  const std::vector<double> scale(bits.begin(), bits.end());
  return run_policy(instance.graph, perturbed_greedy_policy(instance.graph, y.y),
                    outcomes, scale);
}

std::string_view to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kPerturbedGreedy: return "pg";
    case AlgorithmId::kGreedy: return "greedy";
    case AlgorithmId::kPgBMatching: return "pg-bmatch";
    case AlgorithmId::kPgAdwords: return "pg-adwords";
    case AlgorithmId::kPgCorrelated: return "pg-corr";
  }
  return "pg";
}

std::optional<AlgorithmId> parse_algorithm(std::string_view text) {
  for (AlgorithmId id : {AlgorithmId::kPerturbedGreedy, AlgorithmId::kGreedy,
                         AlgorithmId::kPgBMatching, AlgorithmId::kPgAdwords,
                         AlgorithmId::kPgCorrelated}) {
    if (text == to_string(id)) return id;
  }
  return std::nullopt;
}

}  // namespace stochmatch
