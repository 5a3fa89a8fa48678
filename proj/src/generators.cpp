#include "stochmatch/generators.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stochmatch/random.hpp"
#include "stochmatch/summation.hpp"

namespace stochmatch {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_family(const RandomFamily& f) {
  require(f.n >= 1, "random family: n must be >= 1");
  require(f.m >= 0, "random family: m must be >= 0");
  require(f.density > 0.0 && f.density <= 1.0,
          "random family: density must be in (0, 1]");
  require(f.weight_lo >= 0.0 && f.weight_lo <= f.weight_hi,
          "random family: weight range must satisfy 0 <= lo <= hi");
}

std::vector<double> draw_weights(const RandomFamily& f, Rng& rng) {
  std::vector<double> w(f.n);
  for (double& v : w) v = rng.uniform(f.weight_lo, f.weight_hi);
  return w;
}

}  // namespace

double hard_weight(int t, int n, double eps) {
  return (1.0 - std::exp(static_cast<double>(t) / (n + 1) - 1.0)) /
         (1.0 - std::exp(-1.0 + eps));
}

StochasticInstance gen_kvv_triangular(int n) {
  require(n >= 1, "kvv: n must be >= 1");
  StochasticInstance inst;
  inst.weights.assign(n, 1.0);
  inst.arrivals.resize(n);
  for (int t = 0; t < n; ++t) {
    for (int i = t; i < n; ++i) inst.arrivals[t].push_back({i, 1.0});
  }
  return inst;
}

StochasticInstance gen_hard_stochastic(const HardInstanceParams& params) {
  const int n = params.n;
  require(n >= 1, "hard-stoch: n must be >= 1");
  require(params.eps > 0.0 && params.eps < 1.0, "hard-stoch: eps must be in (0, 1)");
  const double p = params.edge_scale();
  require(p > 0.0, "hard-stoch: p must be positive");
  require(p * hard_weight(1, n, params.eps) < 1.0, "hard-stoch: p * w(1) must be < 1");

  StochasticInstance inst;
  inst.weights.assign(n + 1, 1.0);
  inst.weights[n] = 1.0 / p;
  inst.arrivals.resize(2 * n);
  for (int t = 0; t < 2 * n; ++t) {
    auto& adj = inst.arrivals[t];
    adj.reserve(n + 1);
    for (int i = 0; i < n; ++i) adj.push_back({i, 1.0});
    if (t < n) adj.push_back({n, p * hard_weight(t + 1, n, params.eps)});
  }
  return inst;
}

BudgetedInstance gen_hard_adwords(int n, double eps) {
  require(n >= 1, "hard-adwords: n must be >= 1");
  require(eps > 0.0 && eps < 1.0, "hard-adwords: eps must be in (0, 1)");
  BudgetedInstance inst;
  inst.kind = BudgetKind::kAdwords;
  inst.budgets_hidden = true;
  inst.weights.assign(n + 1, 1.0);
  inst.budgets.assign(n + 1, 1.0);
  CompensatedSum total;
  for (int t = 1; t <= n; ++t) total.add(hard_weight(t, n, eps));
  inst.budgets[n] = total.value();
  inst.arrivals.resize(2 * n);
  for (int t = 0; t < 2 * n; ++t) {
    auto& adj = inst.arrivals[t];
    adj.reserve(n + 1);
    for (int i = 0; i < n; ++i) adj.push_back({i, 1.0});
    if (t < n) adj.push_back({n, hard_weight(t + 1, n, eps)});
  }
  return inst;
}

StochasticInstance gen_omniscient_separator(int n) {
  require(n >= 1, "separator: n must be >= 1");
  StochasticInstance inst;
  inst.weights.assign(n, 1.0);
  inst.arrivals.resize(1);
  for (int i = 0; i < n; ++i) inst.arrivals[0].push_back({i, 1.0 / n});
  return inst;
}

double omniscient_separator_value(int n) {
  return 1.0 - std::pow(1.0 - 1.0 / n, n);
}

StochasticInstance gen_random(const RandomFamily& f, std::uint64_t seed) {
  check_family(f);
  Rng rng(seed);
  StochasticInstance inst;
  inst.weights = draw_weights(f, rng);

  double shared = 1.0;
  std::vector<double> rp(f.n, 1.0), ap(f.m, 1.0);
  switch (f.prob_class) {
    case ProbClass::kDeterministic:
    case ProbClass::kGeneral:
      break;
    case ProbClass::kIdentical:
      shared = rng.uniform_positive();
      break;
    case ProbClass::kArrivalUniform:
      for (double& v : ap) v = rng.uniform_positive();
      break;
    case ProbClass::kResourceUniform:
      for (double& v : rp) v = rng.uniform_positive();
      break;
    case ProbClass::kDecomposable:
      for (double& v : rp) v = rng.uniform_positive();
      for (double& v : ap) v = rng.uniform_positive();
      break;
  }

  inst.arrivals.resize(f.m);
  for (int t = 0; t < f.m; ++t) {
    for (int i = 0; i < f.n; ++i) {
      if (!(rng.uniform() < f.density)) continue;
      double p = shared * rp[i] * ap[t];
      if (f.prob_class == ProbClass::kGeneral) p = rng.uniform_positive();
      inst.arrivals[t].push_back({i, p});
    }
  }
  return inst;
}

CorrelatedInstance gen_random_correlated(const RandomFamily& f, int support_size,
                                         std::uint64_t seed) {
  check_family(f);
  require(support_size >= 1, "correlated: support size must be >= 1");
  Rng rng(seed);
  StochasticInstance graph;
  graph.weights = draw_weights(f, rng);
  std::vector<double> rp(f.n);
  for (double& v : rp) v = rng.uniform_positive();
  graph.arrivals.resize(f.m);
  for (int t = 0; t < f.m; ++t) {
    for (int i = 0; i < f.n; ++i) {
      if (rng.uniform() < f.density) graph.arrivals[t].push_back({i, rp[i]});
    }
  }
  std::vector<ArrivalAtom> support(support_size);
  CompensatedSum total;
  for (ArrivalAtom& atom : support) {
    atom.bits.resize(f.m);
    for (auto& b : atom.bits) b = rng.uniform() < 0.5 ? 1 : 0;
    atom.prob = rng.uniform_positive();
    total.add(atom.prob);
  }
  for (ArrivalAtom& atom : support) atom.prob /= total.value();
  return make_correlated(std::move(graph), std::move(rp), std::move(support));
}

}  // namespace stochmatch
