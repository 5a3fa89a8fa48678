#pragma once

// Instance types for online bipartite matching with stochastic rewards and
// its budgeted relatives (b-matching, Adwords), plus validation and
// probability-structure classification.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace stochmatch {

// Dense 0-based ids. Arrival order is index order.
using ResourceId = std::int32_t;
using ArrivalId = std::int32_t;

// Absolute tolerances used when comparing probabilities.
inline constexpr double kExactTolerance = 1e-12;
inline constexpr double kFactorTolerance = 1e-9;

struct Edge {
  ResourceId resource = 0;
  double prob = 1.0;

  bool operator==(const Edge&) const = default;
};

// Vertex-weighted bipartite graph with per-edge success probabilities.
// Each arrival's incident edges are kept sorted by resource id.
struct StochasticInstance {
  std::vector<double> weights;              // r_i, indexed by resource
  std::vector<std::vector<Edge>> arrivals;  // incident edges per arrival

  int num_resources() const { return static_cast<int>(weights.size()); }
  int num_arrivals() const { return static_cast<int>(arrivals.size()); }
  std::size_t num_edges() const;

  // Success probability of (resource, arrival), or nullopt when absent.
  std::optional<double> prob(ResourceId resource, ArrivalId arrival) const;

  bool operator==(const StochasticInstance&) const = default;
};

struct EdgeSpec {
  ResourceId resource;
  ArrivalId arrival;
  double prob;
};

// Builds an instance from an unordered edge list; sorts adjacency lists.
StochasticInstance make_instance(std::vector<double> weights, int num_arrivals,
                                 const std::vector<EdgeSpec>& edges);

// One atom of the joint distribution over arrival-side success bits.
struct ArrivalAtom {
  std::vector<std::uint8_t> bits;  // s_t per arrival
  double prob = 0.0;

  bool operator==(const ArrivalAtom&) const = default;
};

// Time-correlated rewards: edge (i, t) succeeds iff s_t = 1 and a fresh
// Bernoulli(p_i) draw succeeds. `graph` carries the edge set and weights; its
// edge probabilities equal the resource marginals p_i, which is all an online
// algorithm gets to see.
struct CorrelatedInstance {
  StochasticInstance graph;
  std::vector<double> resource_probs;
  std::vector<ArrivalAtom> support;

  // P(s_t = 1) for every arrival.
  std::vector<double> arrival_marginals() const;

  bool operator==(const CorrelatedInstance&) const = default;
};

// Rebuilds `graph` edge probabilities from `resource_probs`.
CorrelatedInstance make_correlated(StochasticInstance graph,
                                   std::vector<double> resource_probs,
                                   std::vector<ArrivalAtom> support);

enum class BudgetKind { kBMatching, kAdwords };

struct Bid {
  ResourceId resource = 0;
  double amount = 0.0;

  bool operator==(const Bid&) const = default;
};

// b-matching: budgets are positive integers (match counts) and every bid
// equals the resource weight. Adwords: budgets are real amounts and a match
// consumes and earns min(remaining budget, bid).
struct BudgetedInstance {
  BudgetKind kind = BudgetKind::kBMatching;
  std::vector<double> weights;
  std::vector<double> budgets;
  std::vector<std::vector<Bid>> arrivals;
  bool budgets_hidden = true;

  int num_resources() const { return static_cast<int>(weights.size()); }
  int num_arrivals() const { return static_cast<int>(arrivals.size()); }
  std::size_t num_edges() const;

  bool operator==(const BudgetedInstance&) const = default;
};

// Builds a b-matching instance; bids are set to the resource weights.
BudgetedInstance make_bmatching(std::vector<double> weights,
                                std::vector<double> budgets, int num_arrivals,
                                const std::vector<std::pair<ResourceId, ArrivalId>>& edges,
                                bool budgets_hidden = true);

using AnyInstance =
    std::variant<StochasticInstance, CorrelatedInstance, BudgetedInstance>;

// Every invariant violation, each message naming the offending element.
// An empty list means the instance is valid.
std::vector<std::string> validate(const StochasticInstance& instance);
std::vector<std::string> validate(const CorrelatedInstance& instance);
std::vector<std::string> validate(const BudgetedInstance& instance);
std::vector<std::string> validate(const AnyInstance& instance);

enum class ProbClass {
  kDeterministic,
  kIdentical,
  kArrivalUniform,
  kResourceUniform,
  kDecomposable,
  kGeneral,
};

std::string_view to_string(ProbClass cls);
std::optional<ProbClass> parse_prob_class(std::string_view text);

// True when `got` implies `wanted` (e.g. Identical implies Decomposable).
bool implies(ProbClass got, ProbClass wanted);

struct Classification {
  ProbClass cls = ProbClass::kGeneral;
  double identical_prob = 1.0;  // meaningful for Deterministic/Identical
  // p_it = resource_factors[i] * arrival_factors[t] on every edge; filled for
  // Decomposable and every stricter class, empty for General.
  std::vector<double> resource_factors;
  std::vector<double> arrival_factors;
};

// Most specific class whose defining equation holds on all edges. When both
// ArrivalUniform and ResourceUniform hold (but not Identical), ArrivalUniform
// is reported.
Classification classify(const StochasticInstance& instance);

// Whether the defining equation of `wanted` holds on every edge.
bool belongs_to(const StochasticInstance& instance, ProbClass wanted);

// Per-resource common edge probability, when every resource's edges share
// one (resources without edges get 1).
std::optional<std::vector<double>> resource_uniform_probs(
    const StochasticInstance& instance);

// Per-arrival common edge probability (arrivals without edges get 1).
std::optional<std::vector<double>> arrival_uniform_probs(
    const StochasticInstance& instance);

// b-matching as Adwords: budget b_i * r_i, bid r_i on every edge.
BudgetedInstance bmatching_to_adwords(const BudgetedInstance& instance);

}  // namespace stochmatch
