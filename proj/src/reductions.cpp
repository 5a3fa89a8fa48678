#include "stochmatch/reductions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stochmatch/errors.hpp"
#include "stochmatch/oracles.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/summation.hpp"

namespace stochmatch {

namespace {

struct BitOutcome {
  std::vector<std::uint8_t> bits;
  double weight;
};

// All positive-probability outcomes of independent coins with the given
// success probabilities.
std::vector<BitOutcome> enumerate_coins(const std::vector<double>& probs) {
  std::uint64_t count = 1;
  for (double p : probs) {
    if (p > 0.0 && p < 1.0) {
      count *= 2;
      if (count > kMaxEnumeration) {
        throw GuardError("reduction enumeration exceeds " +
                         std::to_string(kMaxEnumeration) + " outcomes");
      }
    }
  }
  std::vector<BitOutcome> out{{{}, 1.0}};
  for (double p : probs) {
    std::vector<BitOutcome> next;
    next.reserve(out.size() * 2);
    for (const BitOutcome& o : out) {
      if (p > 0.0) {
        next.push_back(o);
        next.back().bits.push_back(1);
        next.back().weight *= std::min(p, 1.0);
      }
      if (p < 1.0) {
        next.push_back(o);
        next.back().bits.push_back(0);
        next.back().weight *= 1.0 - std::max(p, 0.0);
      }
    }
    out.swap(next);
  }
  return out;
}

std::vector<double> identical_arrival_probs(const StochasticInstance& instance) {
  auto probs = arrival_uniform_probs(instance);
  if (!probs) {
    throw std::invalid_argument(
        "identical reduction: wrong probability class (edges of an arrival differ)");
  }
  return *probs;
}

Classification decomposable_factors(const StochasticInstance& instance) {
  Classification c = classify(instance);
  if (c.cls == ProbClass::kGeneral) {
    throw std::invalid_argument(
        "arrival reduction: wrong probability class (not decomposable)");
  }
  return c;
}

std::vector<double> budget_resource_probs(const StochasticInstance& instance) {
  auto probs = resource_uniform_probs(instance);
  if (!probs) {
    throw std::invalid_argument(
        "budgets reduction: wrong probability class (edges of a resource differ)");
  }
  return *probs;
}

BudgetedInstance budgeted_from(const StochasticInstance& instance,
                               const std::vector<double>& resource_probs,
                               const std::vector<int>& budgets) {
  BudgetedInstance out;
  out.kind = BudgetKind::kBMatching;
  out.budgets_hidden = true;
  const int n = instance.num_resources();
  out.weights.resize(n);
  out.budgets.resize(n);
  for (int i = 0; i < n; ++i) {
    out.weights[i] = instance.weights[i] * resource_probs[i];
    out.budgets[i] = budgets[i];
  }
  out.arrivals.resize(instance.arrivals.size());
  for (std::size_t t = 0; t < instance.arrivals.size(); ++t) {
    for (const Edge& e : instance.arrivals[t]) {
      out.arrivals[t].push_back({e.resource, out.weights[e.resource]});
    }
  }
  return out;
}

double reduced_value(const StochasticInstance& reduced, const PolicySpec& policy) {
  return exact_policy_value(reduced, policy.on(reduced)).realized;
}

double reduced_value(const BudgetedInstance& reduced, const PolicySpec& policy) {
  return run_budgeted(reduced, policy.on(reduced)).realized_total;
}

template <typename Samples>
PreservationCheck mix(double lhs, const Samples& samples, const PolicySpec& policy) {
  PreservationCheck out;
  out.lhs = lhs;
  CompensatedSum rhs, weights;
  for (const auto& s : samples) {
    rhs.add(s.weight * reduced_value(s.reduced, policy));
    weights.add(s.weight);
  }
  out.rhs = rhs.value();
  out.diff = std::abs(out.lhs - out.rhs);
  out.samples = samples.size();
  out.weight_total = weights.value();
  return out;
}

}  // namespace

ArrivalSubsetSample restrict_arrivals(const StochasticInstance& instance,
                                      const std::vector<std::uint8_t>& bits,
                                      const std::vector<double>* resource_probs,
                                      double weight) {
  ArrivalSubsetSample out;
  out.arrival_bits = bits;
  out.weight = weight;
  out.reduced.weights = instance.weights;
  for (ArrivalId t = 0; t < instance.num_arrivals(); ++t) {
    if (!bits[t]) continue;
    out.kept.push_back(t);
    auto& adj = out.reduced.arrivals.emplace_back();
    for (const Edge& e : instance.arrivals[t]) {
      adj.push_back({e.resource, resource_probs ? (*resource_probs)[e.resource] : 1.0});
    }
  }
  return out;
}

ArrivalSubsetSample sample_identical(const StochasticInstance& instance,
                                     std::uint64_t seed) {
  const auto probs = identical_arrival_probs(instance);
  Rng rng(seed);
  std::vector<std::uint8_t> bits(probs.size());
  for (std::size_t t = 0; t < probs.size(); ++t) bits[t] = rng.bernoulli(probs[t]);
  return restrict_arrivals(instance, bits, nullptr, 1.0);
}

std::vector<ArrivalSubsetSample> enumerate_identical(const StochasticInstance& instance) {
  std::vector<ArrivalSubsetSample> out;
  for (const BitOutcome& o : enumerate_coins(identical_arrival_probs(instance))) {
    out.push_back(restrict_arrivals(instance, o.bits, nullptr, o.weight));
  }
  return out;
}

ArrivalSubsetSample sample_arrival_side(const StochasticInstance& instance,
                                        std::uint64_t seed) {
  const Classification c = decomposable_factors(instance);
  Rng rng(seed);
  std::vector<std::uint8_t> bits(c.arrival_factors.size());
  for (std::size_t t = 0; t < bits.size(); ++t) {
    bits[t] = rng.bernoulli(c.arrival_factors[t]);
  }
  return restrict_arrivals(instance, bits, &c.resource_factors, 1.0);
}

std::vector<ArrivalSubsetSample> enumerate_arrival_side(
    const StochasticInstance& instance) {
  const Classification c = decomposable_factors(instance);
  std::vector<ArrivalSubsetSample> out;
  for (const BitOutcome& o : enumerate_coins(c.arrival_factors)) {
    out.push_back(restrict_arrivals(instance, o.bits, &c.resource_factors, o.weight));
  }
  return out;
}

std::vector<double> truncated_geometric(double p, int m) {
  std::vector<double> dist(m + 1);
  double miss = 1.0;  // (1 - p)^(k - 1)
  for (int k = 1; k <= m; ++k) {
    dist[k - 1] = p * miss;
    miss *= 1.0 - p;
  }
  dist[m] = miss;
  return dist;
}

BudgetSample sample_budgets(const StochasticInstance& instance, std::uint64_t seed) {
  const auto probs = budget_resource_probs(instance);
  const int m = instance.num_arrivals();
  Rng rng(seed);
  BudgetSample out;
  out.budgets.resize(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    int k = 1;
    while (k <= m && !rng.bernoulli(probs[i])) ++k;
    out.budgets[i] = k;
  }
  out.reduced = budgeted_from(instance, probs, out.budgets);
  return out;
}

std::vector<BudgetSample> enumerate_budgets(const StochasticInstance& instance) {
  const auto probs = budget_resource_probs(instance);
  const int m = instance.num_arrivals();

  std::vector<std::vector<std::pair<int, double>>> choices(probs.size());
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const auto dist = truncated_geometric(probs[i], m);
    for (int k = 1; k <= m + 1; ++k) {
      if (dist[k - 1] > 0.0) choices[i].emplace_back(k, dist[k - 1]);
    }
    count *= choices[i].size();
    if (count > kMaxEnumeration) {
      throw GuardError("reduction enumeration exceeds " +
                       std::to_string(kMaxEnumeration) + " outcomes");
    }
  }

  std::vector<BudgetSample> out;
  out.reserve(count);
  std::vector<std::size_t> digit(probs.size(), 0);
  for (std::uint64_t c = 0; c < count; ++c) {
    BudgetSample s;
    s.budgets.resize(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      s.budgets[i] = choices[i][digit[i]].first;
      s.weight *= choices[i][digit[i]].second;
    }
    s.reduced = budgeted_from(instance, probs, s.budgets);
    out.push_back(std::move(s));
    for (std::size_t i = 0; i < digit.size(); ++i) {
      if (++digit[i] < choices[i].size()) break;
      digit[i] = 0;
    }
  }
  return out;
}

ArrivalSubsetSample sample_correlated(const CorrelatedInstance& instance,
                                      std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t atom = pick_atom(instance, rng.uniform());
  return restrict_arrivals(instance.graph, instance.support[atom].bits,
                           &instance.resource_probs, 1.0);
}

std::vector<ArrivalSubsetSample> enumerate_correlated(const CorrelatedInstance& instance) {
  std::vector<ArrivalSubsetSample> out;
  for (const ArrivalAtom& atom : instance.support) {
    if (atom.prob <= 0.0) continue;
    out.push_back(restrict_arrivals(instance.graph, atom.bits,
                                    &instance.resource_probs, atom.prob));
  }
  return out;
}

std::string_view to_string(Reduction reduction) {
  switch (reduction) {
    case Reduction::kIdentical: return "identical";
    case Reduction::kArrivalSide: return "arrival";
    case Reduction::kBudgets: return "budgets";
    case Reduction::kCorrelated: return "correlated";
  }
  return "identical";
}

std::optional<Reduction> parse_reduction(std::string_view text) {
  for (Reduction r : {Reduction::kIdentical, Reduction::kArrivalSide,
                      Reduction::kBudgets, Reduction::kCorrelated}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

PriorityPolicy PolicySpec::on(const StochasticInstance& instance) const {
  return kind == Kind::kGreedy ? greedy_policy(instance)
                               : perturbed_greedy_policy(instance, y);
}

PriorityPolicy PolicySpec::on(const BudgetedInstance& instance) const {
  return kind == Kind::kGreedy ? greedy_policy(instance)
                               : perturbed_greedy_policy(instance, y);
}

PreservationCheck check_value_preservation(const StochasticInstance& instance,
                                           Reduction reduction,
                                           const PolicySpec& policy) {
  const double lhs = exact_policy_value(instance, policy.on(instance)).realized;
  switch (reduction) {
    case Reduction::kIdentical:
      return mix(lhs, enumerate_identical(instance), policy);
    case Reduction::kArrivalSide:
      return mix(lhs, enumerate_arrival_side(instance), policy);
    case Reduction::kBudgets:
      return mix(lhs, enumerate_budgets(instance), policy);
    case Reduction::kCorrelated:
      break;
  }
  throw std::invalid_argument("correlated reduction needs a correlated instance");
}

PreservationCheck check_value_preservation(const CorrelatedInstance& instance,
                                           const PolicySpec& policy) {
  const double lhs = exact_policy_value(instance, policy.on(instance.graph)).realized;
  return mix(lhs, enumerate_correlated(instance), policy);
}

PreservationCheck check_composed_preservation(const StochasticInstance& instance,
                                              const PolicySpec& policy) {
  PreservationCheck out;
  out.lhs = exact_policy_value(instance, policy.on(instance)).realized;
  CompensatedSum rhs, weights;
  for (const ArrivalSubsetSample& outer : enumerate_arrival_side(instance)) {
    for (const BudgetSample& inner : enumerate_budgets(outer.reduced)) {
      const double w = outer.weight * inner.weight;
      rhs.add(w * reduced_value(inner.reduced, policy));
      weights.add(w);
      ++out.samples;
    }
  }
  out.rhs = rhs.value();
  out.diff = std::abs(out.lhs - out.rhs);
  out.weight_total = weights.value();
  return out;
}

}  // namespace stochmatch
