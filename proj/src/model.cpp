#include "stochmatch/model.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace stochmatch {

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

bool in_unit_interval(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

template <typename EdgeT>
void check_adjacency(const std::vector<std::vector<EdgeT>>& arrivals,
                     int num_resources, std::vector<std::string>& errors) {
  for (std::size_t t = 0; t < arrivals.size(); ++t) {
    ResourceId previous = -1;
    for (const auto& e : arrivals[t]) {
      if (e.resource < 0 || e.resource >= num_resources) {
        errors.push_back("arrival " + std::to_string(t) +
                         ": edge references unknown resource " +
                         std::to_string(e.resource));
        continue;
      }
      if (e.resource == previous) {
        errors.push_back("arrival " + std::to_string(t) +
                         ": duplicate edge to resource " +
                         std::to_string(e.resource));
      } else if (e.resource < previous) {
        errors.push_back("arrival " + std::to_string(t) +
                         ": edges not sorted by resource");
      }
      previous = e.resource;
    }
  }
}

void check_weights(const std::vector<double>& weights,
                   std::vector<std::string>& errors) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      errors.push_back("resource " + std::to_string(i) +
                       ": weight out of range (" + format_value(weights[i]) + ")");
    }
  }
}

// Factorization over the edge graph; see classify().
std::optional<std::pair<std::vector<double>, std::vector<double>>> factorize(
    const StochasticInstance& inst) {
  const int n = inst.num_resources();
  const int m = inst.num_arrivals();
  std::vector<std::vector<std::pair<ArrivalId, double>>> by_resource(n);
  std::vector<int> positive_r(n, 0), degree_r(n, 0);
  std::vector<int> positive_t(m, 0);
  for (ArrivalId t = 0; t < m; ++t) {
    for (const Edge& e : inst.arrivals[t]) {
      by_resource[e.resource].emplace_back(t, e.prob);
      ++degree_r[e.resource];
      if (e.prob > kExactTolerance) {
        ++positive_r[e.resource];
        ++positive_t[t];
      }
    }
  }

  // Nodes whose edges are all zero get factor 0; nodes without edges get 1.
  constexpr double kUnset = -1.0;
  std::vector<double> rf(n, kUnset), af(m, kUnset);
  for (int i = 0; i < n; ++i) {
    if (degree_r[i] == 0) rf[i] = 1.0;
    else if (positive_r[i] == 0) rf[i] = 0.0;
  }
  for (ArrivalId t = 0; t < m; ++t) {
    if (inst.arrivals[t].empty()) af[t] = 1.0;
    else if (positive_t[t] == 0) af[t] = 0.0;
  }

  // Propagate ratios across positive edges, one component at a time.
  for (int root = 0; root < n; ++root) {
    if (rf[root] != kUnset) continue;
    std::vector<int> comp_r, comp_t;
    std::deque<std::pair<bool, int>> queue;  // (is_resource, id)
    rf[root] = 1.0;
    queue.emplace_back(true, root);
    while (!queue.empty()) {
      auto [is_resource, id] = queue.front();
      queue.pop_front();
      if (is_resource) {
        comp_r.push_back(id);
        for (auto [t, p] : by_resource[id]) {
          if (p <= kExactTolerance || af[t] != kUnset) continue;
          af[t] = p / rf[id];
          queue.emplace_back(false, t);
        }
      } else {
        comp_t.push_back(id);
        for (const Edge& e : inst.arrivals[id]) {
          if (e.prob <= kExactTolerance || rf[e.resource] != kUnset) continue;
          rf[e.resource] = e.prob / af[id];
          queue.emplace_back(true, e.resource);
        }
      }
    }
    double scale = 0.0;
    for (int t : comp_t) scale = std::max(scale, af[t]);
    if (scale <= 0.0) continue;
    for (int t : comp_t) af[t] /= scale;
    for (int i : comp_r) {
      rf[i] *= scale;
      if (rf[i] > 1.0 + kFactorTolerance) return std::nullopt;
      rf[i] = std::min(rf[i], 1.0);
    }
  }

  for (ArrivalId t = 0; t < m; ++t) {
    if (af[t] == kUnset) return std::nullopt;
    for (const Edge& e : inst.arrivals[t]) {
      if (rf[e.resource] == kUnset) return std::nullopt;
      if (std::abs(rf[e.resource] * af[t] - e.prob) > kFactorTolerance) {
        return std::nullopt;
      }
    }
  }
  return std::make_pair(std::move(rf), std::move(af));
}

}  // namespace

std::size_t StochasticInstance::num_edges() const {
  std::size_t total = 0;
  for (const auto& adj : arrivals) total += adj.size();
  return total;
}

std::optional<double> StochasticInstance::prob(ResourceId resource,
                                               ArrivalId arrival) const {
  if (arrival < 0 || arrival >= num_arrivals()) return std::nullopt;
  const auto& adj = arrivals[arrival];
  auto it = std::lower_bound(
      adj.begin(), adj.end(), resource,
      [](const Edge& e, ResourceId r) { return e.resource < r; });
  if (it == adj.end() || it->resource != resource) return std::nullopt;
  return it->prob;
}

StochasticInstance make_instance(std::vector<double> weights, int num_arrivals,
                                 const std::vector<EdgeSpec>& edges) {
  StochasticInstance inst;
  inst.weights = std::move(weights);
  inst.arrivals.resize(num_arrivals);
  for (const EdgeSpec& e : edges) {
    inst.arrivals.at(e.arrival).push_back({e.resource, e.prob});
  }
  for (auto& adj : inst.arrivals) {
    std::stable_sort(adj.begin(), adj.end(), [](const Edge& a, const Edge& b) {
      return a.resource < b.resource;
    });
  }
  return inst;
}

std::vector<double> CorrelatedInstance::arrival_marginals() const {
  std::vector<double> marginals(graph.num_arrivals(), 0.0);
  for (const ArrivalAtom& atom : support) {
    for (std::size_t t = 0; t < marginals.size() && t < atom.bits.size(); ++t) {
      if (atom.bits[t]) marginals[t] += atom.prob;
    }
  }
  return marginals;
}

CorrelatedInstance make_correlated(StochasticInstance graph,
                                   std::vector<double> resource_probs,
                                   std::vector<ArrivalAtom> support) {
  for (auto& adj : graph.arrivals) {
    for (Edge& e : adj) {
      if (e.resource >= 0 &&
          e.resource < static_cast<ResourceId>(resource_probs.size())) {
        e.prob = resource_probs[e.resource];
      }
    }
  }
  return {std::move(graph), std::move(resource_probs), std::move(support)};
}

std::size_t BudgetedInstance::num_edges() const {
  std::size_t total = 0;
  for (const auto& adj : arrivals) total += adj.size();
  return total;
}

BudgetedInstance make_bmatching(
    std::vector<double> weights, std::vector<double> budgets, int num_arrivals,
    const std::vector<std::pair<ResourceId, ArrivalId>>& edges,
    bool budgets_hidden) {
  BudgetedInstance inst;
  inst.kind = BudgetKind::kBMatching;
  inst.weights = std::move(weights);
  inst.budgets = std::move(budgets);
  inst.budgets_hidden = budgets_hidden;
  inst.arrivals.resize(num_arrivals);
  for (auto [i, t] : edges) {
    inst.arrivals.at(t).push_back({i, inst.weights.at(i)});
  }
  for (auto& adj : inst.arrivals) {
    std::stable_sort(adj.begin(), adj.end(), [](const Bid& a, const Bid& b) {
      return a.resource < b.resource;
    });
  }
  return inst;
}

std::vector<std::string> validate(const StochasticInstance& instance) {
  std::vector<std::string> errors;
  check_weights(instance.weights, errors);
  check_adjacency(instance.arrivals, instance.num_resources(), errors);
  for (std::size_t t = 0; t < instance.arrivals.size(); ++t) {
    for (const Edge& e : instance.arrivals[t]) {
      if (!in_unit_interval(e.prob)) {
        errors.push_back("edge (" + std::to_string(e.resource) + ", " +
                         std::to_string(t) + "): probability out of range (" +
                         format_value(e.prob) + ")");
      }
    }
  }
  return errors;
}

std::vector<std::string> validate(const CorrelatedInstance& instance) {
  std::vector<std::string> errors = validate(instance.graph);
  const int n = instance.graph.num_resources();
  const std::size_t m = instance.graph.arrivals.size();
  if (static_cast<int>(instance.resource_probs.size()) != n) {
    errors.push_back("resource probabilities: expected " + std::to_string(n) +
                     " entries, got " +
                     std::to_string(instance.resource_probs.size()));
  } else {
    for (int i = 0; i < n; ++i) {
      if (!in_unit_interval(instance.resource_probs[i])) {
        errors.push_back("resource " + std::to_string(i) +
                         ": probability out of range (" +
                         format_value(instance.resource_probs[i]) + ")");
      }
    }
    for (std::size_t t = 0; t < m; ++t) {
      for (const Edge& e : instance.graph.arrivals[t]) {
        if (e.resource < 0 || e.resource >= n) continue;
        if (std::abs(e.prob - instance.resource_probs[e.resource]) >
            kExactTolerance) {
          errors.push_back("edge (" + std::to_string(e.resource) + ", " +
                           std::to_string(t) +
                           "): probability differs from resource marginal");
        }
      }
    }
  }
  if (instance.support.empty()) {
    errors.push_back("arrival distribution: empty support");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < instance.support.size(); ++k) {
    const ArrivalAtom& atom = instance.support[k];
    if (atom.bits.size() != m) {
      errors.push_back("support atom " + std::to_string(k) + ": has " +
                       std::to_string(atom.bits.size()) + " bits, expected " +
                       std::to_string(m));
    }
    for (std::uint8_t b : atom.bits) {
      if (b > 1) {
        errors.push_back("support atom " + std::to_string(k) +
                         ": bit value other than 0/1");
        break;
      }
    }
    if (!std::isfinite(atom.prob) || atom.prob < 0.0) {
      errors.push_back("support atom " + std::to_string(k) +
                       ": negative probability (" + format_value(atom.prob) + ")");
    }
    total += atom.prob;
  }
  if (!instance.support.empty() && std::abs(total - 1.0) > kExactTolerance) {
    errors.push_back("arrival distribution: distribution sums to " +
                     format_value(total));
  }
  return errors;
}

std::vector<std::string> validate(const BudgetedInstance& instance) {
  std::vector<std::string> errors;
  const int n = instance.num_resources();
  check_weights(instance.weights, errors);
  check_adjacency(instance.arrivals, n, errors);
  if (static_cast<int>(instance.budgets.size()) != n) {
    errors.push_back("budgets: expected " + std::to_string(n) +
                     " entries, got " + std::to_string(instance.budgets.size()));
    return errors;
  }
  for (int i = 0; i < n; ++i) {
    const double b = instance.budgets[i];
    if (instance.kind == BudgetKind::kBMatching) {
      if (!std::isfinite(b) || b < 1.0 || b != std::floor(b)) {
        errors.push_back("resource " + std::to_string(i) +
                         ": budget must be a positive integer (" +
                         format_value(b) + ")");
      }
    } else if (!std::isfinite(b) || b < 0.0) {
      errors.push_back("resource " + std::to_string(i) +
                       ": budget out of range (" + format_value(b) + ")");
    }
  }
  for (std::size_t t = 0; t < instance.arrivals.size(); ++t) {
    for (const Bid& bid : instance.arrivals[t]) {
      if (bid.resource < 0 || bid.resource >= n) continue;
      const std::string where = "edge (" + std::to_string(bid.resource) + ", " +
                                std::to_string(t) + ")";
      if (!std::isfinite(bid.amount) || bid.amount < 0.0) {
        errors.push_back(where + ": bid out of range (" +
                         format_value(bid.amount) + ")");
      } else if (instance.kind == BudgetKind::kBMatching &&
                 bid.amount != instance.weights[bid.resource]) {
        errors.push_back(where + ": b-matching bid differs from resource weight");
      }
    }
  }
  return errors;
}

std::vector<std::string> validate(const AnyInstance& instance) {
  return std::visit([](const auto& inst) { return validate(inst); }, instance);
}

std::string_view to_string(ProbClass cls) {
  switch (cls) {
    case ProbClass::kDeterministic: return "deterministic";
    case ProbClass::kIdentical: return "identical";
    case ProbClass::kArrivalUniform: return "arrival-uniform";
    case ProbClass::kResourceUniform: return "resource-uniform";
    case ProbClass::kDecomposable: return "decomposable";
    case ProbClass::kGeneral: return "general";
  }
  return "general";
}

std::optional<ProbClass> parse_prob_class(std::string_view text) {
  for (ProbClass c : {ProbClass::kDeterministic, ProbClass::kIdentical,
                      ProbClass::kArrivalUniform, ProbClass::kResourceUniform,
                      ProbClass::kDecomposable, ProbClass::kGeneral}) {
    if (text == to_string(c)) return c;
  }
  return std::nullopt;
}

bool implies(ProbClass got, ProbClass wanted) {
  if (wanted == ProbClass::kGeneral || got == wanted) return true;
  switch (got) {
    case ProbClass::kDeterministic: return true;
    case ProbClass::kIdentical: return wanted != ProbClass::kDeterministic;
    case ProbClass::kArrivalUniform:
    case ProbClass::kResourceUniform: return wanted == ProbClass::kDecomposable;
    default: return false;
  }
}

bool belongs_to(const StochasticInstance& instance, ProbClass wanted) {
  const ProbClass got = classify(instance).cls;
  if (implies(got, wanted)) return true;
  // classify() reports only one of the two uniform classes.
  return wanted == ProbClass::kResourceUniform && got == ProbClass::kArrivalUniform &&
         resource_uniform_probs(instance).has_value();
}

std::optional<std::vector<double>> resource_uniform_probs(
    const StochasticInstance& instance) {
  std::vector<double> probs(instance.num_resources(), 1.0);
  std::vector<std::uint8_t> seen(instance.num_resources(), 0);
  for (const auto& adj : instance.arrivals) {
    for (const Edge& e : adj) {
      if (!seen[e.resource]) {
        seen[e.resource] = 1;
        probs[e.resource] = e.prob;
      } else if (std::abs(probs[e.resource] - e.prob) > kExactTolerance) {
        return std::nullopt;
      }
    }
  }
  return probs;
}

std::optional<std::vector<double>> arrival_uniform_probs(
    const StochasticInstance& instance) {
  std::vector<double> probs(instance.num_arrivals(), 1.0);
  for (ArrivalId t = 0; t < instance.num_arrivals(); ++t) {
    const auto& adj = instance.arrivals[t];
    if (adj.empty()) continue;
    probs[t] = adj.front().prob;
    for (const Edge& e : adj) {
      if (std::abs(e.prob - probs[t]) > kExactTolerance) return std::nullopt;
    }
  }
  return probs;
}

Classification classify(const StochasticInstance& instance) {
  Classification out;
  const int n = instance.num_resources();
  const int m = instance.num_arrivals();

  std::optional<double> common;
  bool identical = true;
  for (const auto& adj : instance.arrivals) {
    for (const Edge& e : adj) {
      if (!common) common = e.prob;
      else if (std::abs(e.prob - *common) > kExactTolerance) identical = false;
    }
  }
  if (identical) {
    const double p = common.value_or(1.0);
    out.cls = std::abs(p - 1.0) <= kExactTolerance ? ProbClass::kDeterministic
                                                   : ProbClass::kIdentical;
    out.identical_prob = p;
    out.resource_factors.assign(n, 1.0);
    out.arrival_factors.assign(m, 1.0);
    for (ArrivalId t = 0; t < m; ++t) {
      if (!instance.arrivals[t].empty()) out.arrival_factors[t] = p;
    }
    return out;
  }
  if (auto probs = arrival_uniform_probs(instance)) {
    out.cls = ProbClass::kArrivalUniform;
    out.resource_factors.assign(n, 1.0);
    out.arrival_factors = std::move(*probs);
    return out;
  }
  if (auto probs = resource_uniform_probs(instance)) {
    out.cls = ProbClass::kResourceUniform;
    out.resource_factors = std::move(*probs);
    out.arrival_factors.assign(m, 1.0);
    return out;
  }
  if (auto factors = factorize(instance)) {
    out.cls = ProbClass::kDecomposable;
    out.resource_factors = std::move(factors->first);
    out.arrival_factors = std::move(factors->second);
    return out;
  }
  out.cls = ProbClass::kGeneral;
  return out;
}

BudgetedInstance bmatching_to_adwords(const BudgetedInstance& instance) {
  if (instance.kind != BudgetKind::kBMatching) {
    throw std::invalid_argument("bmatching_to_adwords: input is not b-matching");
  }
  BudgetedInstance out = instance;
  out.kind = BudgetKind::kAdwords;
  for (int i = 0; i < out.num_resources(); ++i) {
    out.budgets[i] = instance.budgets[i] * instance.weights[i];
  }
  for (auto& adj : out.arrivals) {
    for (Bid& bid : adj) bid.amount = instance.weights[bid.resource];
  }
  return out;
}

}  // namespace stochmatch
