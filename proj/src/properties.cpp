#include "stochmatch/properties.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "stochmatch/algorithms.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/harness.hpp"
#include "stochmatch/io.hpp"
#include "stochmatch/oracles.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/summation.hpp"

namespace stochmatch {

namespace {

constexpr double kOneMinusInvE = 0.63212055882855767;  // 1 - 1/e

int draw_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

RandomFamily small_family(Rng& rng, ProbClass cls) {
  RandomFamily f;
  f.n = draw_int(rng, 1, 4);
  f.m = draw_int(rng, 1, 5);
  f.density = rng.uniform(0.5, 1.0);
  f.prob_class = cls;
  return f;
}

PropertyResult result(std::string name, bool passed, double measured,
                      std::string detail = {}) {
  return {std::move(name), passed, measured, std::move(detail)};
}

std::string describe(double value) { return format_number(value); }

// Success on every resource except `failing`.
class ForcedOutcomes final : public OutcomeSource {
 public:
  explicit ForcedOutcomes(ResourceId failing) : failing_(failing) {}
  bool draw(ResourceId resource, ArrivalId, double) override {
    return resource != failing_;
  }

 private:
  ResourceId failing_;
};

Availability random_availability(int n, Rng& rng) {
  Availability a(n);
  for (auto& v : a) v = rng.uniform() < 0.7 ? 1 : 0;
  return a;
}

BudgetedInstance random_budgeted(BudgetKind kind, Rng& rng) {
  const int n = draw_int(rng, 1, 4);
  const int m = draw_int(rng, 1, 8);
  BudgetedInstance b;
  b.kind = kind;
  b.weights.resize(n);
  b.budgets.resize(n);
  for (int i = 0; i < n; ++i) {
    b.weights[i] = rng.uniform(0.5, 2.0);
    b.budgets[i] = kind == BudgetKind::kBMatching ? draw_int(rng, 1, 3)
                                                  : rng.uniform(0.5, 4.0);
  }
  b.arrivals.resize(m);
  for (int t = 0; t < m; ++t) {
    for (int i = 0; i < n; ++i) {
      if (rng.uniform() < 0.7) {
        const double bid = kind == BudgetKind::kBMatching ? b.weights[i]
                                                          : rng.uniform(0.1, 2.0);
        b.arrivals[t].push_back({i, bid});
      }
    }
  }
  return b;
}

// ---- core-model ----------------------------------------------------------

PropertyResult classify_decomposable(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  constexpr int kTrials = 200;
  for (int k = 0; k < kTrials; ++k) {
    RandomFamily f = small_family(rng, ProbClass::kDecomposable);
    f.density = 1.0;
    const auto inst = gen_random(f, rng.next());
    if (!implies(classify(inst).cls, ProbClass::kDecomposable)) ++failures;
  }
  return result("model.classify_decomposable", failures == 0, failures,
                std::to_string(kTrials) + " random factorized instances");
}

PropertyResult serialization_round_trip(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  int trials = 0;
  for (int k = 0; k < 40; ++k) {
    std::vector<AnyInstance> cases;
    cases.push_back(gen_random(small_family(rng, ProbClass::kGeneral), rng.next()));
    cases.push_back(gen_random_correlated(small_family(rng, ProbClass::kGeneral),
                                          draw_int(rng, 1, 4), rng.next()));
    cases.push_back(random_budgeted(BudgetKind::kBMatching, rng));
    cases.push_back(random_budgeted(BudgetKind::kAdwords, rng));
    for (const AnyInstance& x : cases) {
      ++trials;
      if (!(parse_instance(dump_instance(x)) == x)) ++failures;
    }
  }
  return result("model.serialization_round_trip", failures == 0, failures,
                std::to_string(trials) + " instances of all four kinds");
}

PropertyResult adwords_budget_total(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto b = random_budgeted(BudgetKind::kBMatching, rng);
    const auto a = bmatching_to_adwords(b);
    CompensatedSum lhs, rhs;
    for (int i = 0; i < b.num_resources(); ++i) {
      lhs.add(a.budgets[i]);
      rhs.add(b.budgets[i] * b.weights[i]);
    }
    worst = std::max(worst, std::abs(lhs.value() - rhs.value()));
  }
  return result("model.adwords_budget_total", worst == 0.0, worst);
}

// ---- algorithms ----------------------------------------------------------

PropertyResult argmax_scale_invariance(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  for (int k = 0; k < 500; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kGeneral), rng.next());
    const double c = std::exp(rng.uniform(-3.0, 3.0));
    StochasticInstance scaled = inst;
    for (double& w : scaled.weights) w *= c;
    const auto y = PerturbationVector::draw(inst.num_resources(), rng);
    const auto avail = random_availability(inst.num_resources(), rng);
    for (ArrivalId t = 0; t < inst.num_arrivals(); ++t) {
      if (pg_select(inst, t, y.y, avail) != pg_select(scaled, t, y.y, avail)) ++failures;
    }
  }
  return result("algorithms.argmax_scale_invariance", failures == 0, failures);
}

PropertyResult replay_reproduces_trace(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  for (int k = 0; k < 300; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kGeneral), rng.next());
    const std::uint64_t run_seed = rng.next();
    const RunTrace trace = run_perturbed_greedy(inst, run_seed);
    Rng yrng(run_seed);
    const auto y = PerturbationVector::draw(inst.num_resources(), yrng);
    ReplayOutcomes replay(trace.outcome_bits());
    if (!(run_policy(inst, perturbed_greedy_policy(inst, y.y), replay) == trace)) {
      ++failures;
    }
  }
  return result("algorithms.replay_reproduces_trace", failures == 0, failures);
}

PropertyResult accounting_identity(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 300; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kGeneral), rng.next());
    const RunTrace trace = run_perturbed_greedy(inst, rng.next());
    double expected = 0.0;
    for (const MatchEvent& e : trace.events) {
      expected += inst.weights[e.resource] * *inst.prob(e.resource, e.arrival);
    }
    worst = std::max(worst, std::abs(expected - trace.expected_total));
  }
  return result("algorithms.accounting_identity", worst == 0.0, worst);
}

PropertyResult budget_feasibility(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  for (int k = 0; k < 300; ++k) {
    const BudgetKind kind = k % 2 ? BudgetKind::kAdwords : BudgetKind::kBMatching;
    const auto b = random_budgeted(kind, rng);
    const RunTrace trace = kind == BudgetKind::kBMatching ? run_pg_bmatching(b, rng.next())
                                                          : run_pg_adwords(b, rng.next());
    std::vector<double> used(b.num_resources(), 0.0);
    for (const MatchEvent& e : trace.events) {
      used[e.resource] += kind == BudgetKind::kBMatching ? 1.0 : e.realized;
    }
    for (int i = 0; i < b.num_resources(); ++i) {
      if (used[i] > b.budgets[i] * (1.0 + 1e-12)) ++failures;
    }
  }
  return result("algorithms.budget_feasibility", failures == 0, failures);
}

// ---- oracles -------------------------------------------------------------

PropertyResult dp_matches_matching(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kDeterministic), rng.next());
    worst = std::max(worst, std::abs(opt_nonanticipative(inst) -
                                     opt_deterministic_matching(inst)));
  }
  return result("oracles.dp_equals_matching_on_deterministic", worst <= 1e-9, worst);
}

PropertyResult dp_monotone(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  for (int k = 0; k < 150; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kGeneral), rng.next());
    const double base = opt_nonanticipative(inst);
    StochasticInstance bigger = inst;
    const int i = draw_int(rng, 0, inst.num_resources() - 1);
    const int t = draw_int(rng, 0, inst.num_arrivals() - 1);
    auto& adj = bigger.arrivals[t];
    auto it = std::find_if(adj.begin(), adj.end(),
                           [i](const Edge& e) { return e.resource == i; });
    if (it == adj.end()) {
      adj.push_back({i, rng.uniform_positive()});
      std::sort(adj.begin(), adj.end(),
                [](const Edge& a, const Edge& b) { return a.resource < b.resource; });
    } else {
      it->prob = rng.uniform(it->prob, 1.0);
    }
    bigger.weights[i] *= 1.0 + rng.uniform();
    if (opt_nonanticipative(bigger) < base - 1e-12) ++failures;
  }
  return result("oracles.dp_monotone", failures == 0, failures);
}

PropertyResult dp_dominates_policies(std::uint64_t seed) {
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kGeneral), rng.next());
    const double opt = opt_nonanticipative(inst);
    for (const PolicySpec& policy : battery_policies(inst.num_resources(), 3, rng.next())) {
      worst = std::max(worst, exact_policy_value(inst, policy.on(inst)).realized - opt);
    }
  }
  return result("oracles.dp_dominates_policies", worst <= 1e-12, worst,
                "max of policy value minus benchmark");
}

PropertyResult bmatching_unit_budgets(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kDeterministic), rng.next());
    std::vector<std::pair<ResourceId, ArrivalId>> pairs;
    for (ArrivalId t = 0; t < inst.num_arrivals(); ++t) {
      for (const Edge& e : inst.arrivals[t]) pairs.emplace_back(e.resource, t);
    }
    const auto b = make_bmatching(inst.weights,
                                  std::vector<double>(inst.num_resources(), 1.0),
                                  inst.num_arrivals(), pairs);
    worst = std::max(worst, std::abs(opt_bmatching(b) - opt_deterministic_matching(inst)));
  }
  return result("oracles.bmatching_unit_budgets", worst <= 1e-9, worst);
}

PropertyResult identical_mixture(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    RandomFamily f = small_family(rng, ProbClass::kIdentical);
    f.m = draw_int(rng, 1, 6);
    const auto inst = gen_random(f, rng.next());
    const double p = classify(inst).identical_prob;
    const int m = inst.num_arrivals();
    const auto policy = battery_policies(inst.num_resources(), 1, rng.next()).back();
    const double lhs = exact_policy_value(inst, policy.on(inst)).realized;
    CompensatedSum rhs;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
      std::vector<std::uint8_t> bits(m);
      int kept = 0;
      for (int t = 0; t < m; ++t) kept += bits[t] = (mask >> t) & 1u;
      const auto sub = restrict_arrivals(inst, bits, nullptr, 1.0).reduced;
      rhs.add(std::pow(p, kept) * std::pow(1.0 - p, m - kept) *
              exact_policy_value(sub, policy.on(sub)).realized);
    }
    worst = std::max(worst, std::abs(lhs - rhs.value()));
  }
  return result("oracles.identical_subset_mixture", worst <= 1e-9, worst);
}

// ---- reductions ----------------------------------------------------------

PropertyResult preservation_property(Reduction reduction, std::uint64_t seed) {
  const auto b = preservation_battery(reduction, 50, seed);
  const bool ok = b.max_diff <= 1e-9 && b.max_weight_error <= 1e-12;
  return result("reductions.preservation." + std::string(to_string(reduction)), ok,
                b.max_diff,
                std::to_string(b.checks) + " checks, weight error " +
                    describe(b.max_weight_error));
}

PropertyResult composition_property(std::uint64_t seed) {
  const auto b = composition_battery(20, seed);
  const bool ok = b.max_diff <= 1e-9 && b.max_weight_error <= 1e-12;
  return result("reductions.composition", ok, b.max_diff,
                std::to_string(b.checks) + " checks");
}

PropertyResult sampling_consistency(std::uint64_t seed) {
  Rng rng(seed);
  double worst_z = 0.0;
  constexpr int kSamples = 100000;
  for (Reduction reduction : {Reduction::kIdentical, Reduction::kArrivalSide,
                              Reduction::kBudgets, Reduction::kCorrelated}) {
    const std::uint64_t inst_seed = rng.next();
    const PolicySpec policy = PolicySpec::greedy();
    double exact;
    std::vector<double> values(kSamples);
    if (reduction == Reduction::kCorrelated) {
      const auto inst = correlated_reduction_instance(inst_seed);
      exact = check_value_preservation(inst, policy).rhs;
      for (int s = 0; s < kSamples; ++s) {
        const auto r = sample_correlated(inst, derive_seed(seed, s)).reduced;
        values[s] = exact_policy_value(r, policy.on(r)).realized;
      }
    } else {
      const auto inst = reduction_instance(reduction, inst_seed);
      exact = check_value_preservation(inst, reduction, policy).rhs;
      for (int s = 0; s < kSamples; ++s) {
        const std::uint64_t sseed = derive_seed(seed, s);
        if (reduction == Reduction::kBudgets) {
          const auto r = sample_budgets(inst, sseed).reduced;
          values[s] = run_budgeted(r, policy.on(r)).realized_total;
        } else {
          const auto r = reduction == Reduction::kIdentical
                             ? sample_identical(inst, sseed).reduced
                             : sample_arrival_side(inst, sseed).reduced;
          values[s] = exact_policy_value(r, policy.on(r)).realized;
        }
      }
    }
    const Estimate e = summarize(values, seed, Accounting::kRealized);
    const double gap = std::abs(e.mean - exact);
    // Constant samples leave only round-off in both the gap and the std error.
    const double z = gap <= 1e-12 ? 0.0
                     : e.std_error > 0.0 ? gap / e.std_error
                                         : std::numeric_limits<double>::infinity();
    worst_z = std::max(worst_z, z);
  }
  return result("reductions.sampling_matches_enumeration", worst_z <= 4.0, worst_z,
                "largest |mean - exact| in standard errors");
}

// ---- generators ----------------------------------------------------------

PropertyResult hard_coupling(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  for (int n : {1, 2, 3, 5}) {
    const auto stoch = gen_hard_stochastic({n, kHardEps, 0.05});
    const auto adwords = gen_hard_adwords(n, kHardEps);
    for (int k = 0; k < 200; ++k) {
      const auto y = PerturbationVector::draw(n + 1, rng);
      ForcedOutcomes forced(n);
      const RunTrace a = run_policy(stoch, perturbed_greedy_policy(stoch, y.y), forced);
      const RunTrace b = run_budgeted(adwords, perturbed_greedy_policy(adwords, y.y));
      bool same = a.events.size() == b.events.size();
      for (std::size_t e = 0; same && e < a.events.size(); ++e) {
        same = a.events[e].arrival == b.events[e].arrival &&
               a.events[e].resource == b.events[e].resource;
      }
      if (!same) ++failures;
    }
  }
  return result("generators.hard_instance_coupling", failures == 0, failures);
}

PropertyResult class_specificity(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  for (ProbClass cls : {ProbClass::kDeterministic, ProbClass::kIdentical,
                        ProbClass::kArrivalUniform, ProbClass::kResourceUniform,
                        ProbClass::kDecomposable, ProbClass::kGeneral}) {
    for (int k = 0; k < 50; ++k) {
      const auto inst = gen_random(small_family(rng, cls), rng.next());
      if (!belongs_to(inst, cls)) ++failures;
    }
  }
  return result("generators.class_specificity", failures == 0, failures);
}

PropertyResult hard_weight_bounds() {
  int failures = 0;
  for (int n = 1; n <= 500; ++n) {
    const double w1 = hard_weight(1, n, kHardEps);
    const double wn = hard_weight(n, n, kHardEps);
    const double bound = (1.0 - std::exp(-static_cast<double>(n) / (n + 1))) /
                         (1.0 - std::exp(-0.867));
    if (!(wn > 0.0 && (n == 1 ? wn == w1 : wn < w1) && w1 <= bound * (1.0 + 1e-14))) {
      ++failures;
    }
  }
  return result("generators.hard_weight_bounds", failures == 0, failures, "n = 1..500");
}

// ---- harness -------------------------------------------------------------

PropertyResult parallel_determinism(std::uint64_t seed, int workers) {
  Rng rng(seed);
  const int w = std::max(workers, 2);
  int failures = 0;
  const std::vector<std::pair<AlgorithmId, AnyInstance>> cases = {
      {AlgorithmId::kPerturbedGreedy,
       gen_random(small_family(rng, ProbClass::kGeneral), rng.next())},
      {AlgorithmId::kGreedy, gen_random(small_family(rng, ProbClass::kGeneral), rng.next())},
      {AlgorithmId::kPgAdwords, gen_hard_adwords(10, kHardEps)},
      {AlgorithmId::kPgBMatching, random_budgeted(BudgetKind::kBMatching, rng)},
      {AlgorithmId::kPgCorrelated,
       gen_random_correlated(small_family(rng, ProbClass::kGeneral), 3, rng.next())},
  };
  for (const auto& [alg, inst] : cases) {
    for (Accounting mode : {Accounting::kRealized, Accounting::kExpected}) {
      const Estimate a = estimate_value(alg, inst, 5000, seed, mode, 1);
      const Estimate b = estimate_value(alg, inst, 5000, seed, mode, w);
      if (a.mean != b.mean || a.std_error != b.std_error || a.ci_lo != b.ci_lo ||
          a.ci_hi != b.ci_hi) {
        ++failures;
      }
    }
  }
  return result("harness.parallel_determinism", failures == 0, failures,
                "1 vs " + std::to_string(w) + " workers");
}

PropertyResult estimator_equivalence_exact(std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int k = 0; k < 60; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kGeneral), rng.next());
    for (const PolicySpec& policy : battery_policies(inst.num_resources(), 2, rng.next())) {
      const PolicyValue v = exact_policy_value(inst, policy.on(inst));
      worst = std::max(worst, std::abs(v.realized - v.expected));
    }
    const auto corr =
        gen_random_correlated(small_family(rng, ProbClass::kGeneral), 3, rng.next());
    const auto policy = battery_policies(corr.graph.num_resources(), 1, rng.next()).back();
    const PolicyValue v = exact_policy_value(corr, policy.on(corr.graph));
    worst = std::max(worst, std::abs(v.realized - v.expected));
  }
  return result("harness.estimator_equivalence_exact", worst <= 1e-9, worst);
}

PropertyResult estimator_equivalence_mc(std::uint64_t seed, int workers) {
  Rng rng(seed);
  double worst_z = 0.0;
  for (int k = 0; k < 3; ++k) {
    RandomFamily f;
    f.n = 6;
    f.m = 10;
    f.density = 0.6;
    f.prob_class = ProbClass::kGeneral;
    const AnyInstance inst = gen_random(f, rng.next());
    const Estimate a = estimate_value(AlgorithmId::kPerturbedGreedy, inst, 100000,
                                      rng.next(), Accounting::kRealized, workers);
    const Estimate b = estimate_value(AlgorithmId::kPerturbedGreedy, inst, 100000,
                                      rng.next(), Accounting::kExpected, workers);
    const double se = std::hypot(a.std_error, b.std_error);
    worst_z = std::max(worst_z, std::abs(a.mean - b.mean) / se);
  }
  return result("harness.estimator_equivalence_mc", worst_z <= 4.0, worst_z,
                "largest gap in combined standard errors, R = 100000");
}

PropertyResult greedy_half(std::uint64_t seed) {
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 100; ++k) {
    const auto inst = gen_random(small_family(rng, ProbClass::kGeneral), rng.next());
    const double opt = opt_nonanticipative(inst);
    if (opt <= 0.0) continue;
    const double g = exact_policy_value(inst, greedy_policy(inst)).realized;
    worst = std::min(worst, g / opt);
  }
  return result("harness.greedy_half_competitive", worst >= 0.5 - 1e-9, worst,
                "smallest greedy / benchmark");
}

PropertyResult pg_deterministic(std::uint64_t seed, int workers) {
  Rng rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 20; ++k) {
    const AnyInstance inst =
        gen_random(small_family(rng, ProbClass::kDeterministic), rng.next());
    const double opt = opt_deterministic_matching(std::get<StochasticInstance>(inst));
    if (opt <= 0.0) continue;
    const Estimate e = estimate_value(AlgorithmId::kPerturbedGreedy, inst, 20000,
                                      rng.next(), Accounting::kRealized, workers);
    worst = std::min(worst, (e.mean + 4.0 * e.std_error) / opt);
  }
  return result("harness.pg_deterministic_guarantee", worst >= kOneMinusInvE, worst,
                "smallest (mean + 4 stderr) / matching");
}

}  // namespace

PropertyResult ranking_property(std::uint64_t seed, const SelectFn& select, int trials) {
  Rng rng(seed);
  int failures = 0;
  for (int k = 0; k < trials; ++k) {
    RandomFamily f = small_family(rng, ProbClass::kArrivalUniform);
    f.n = draw_int(rng, 2, 6);
    auto inst = gen_random(f, rng.next());
    std::fill(inst.weights.begin(), inst.weights.end(), 1.0);
    const auto y = PerturbationVector::draw(inst.num_resources(), rng);
    const auto avail = random_availability(inst.num_resources(), rng);
    for (ArrivalId t = 0; t < inst.num_arrivals(); ++t) {
      std::optional<ResourceId> expected;
      for (const Edge& e : inst.arrivals[t]) {
        if (avail[e.resource] && (!expected || y.y[e.resource] < y.y[*expected])) {
          expected = e.resource;
        }
      }
      if (select(inst, t, y.y, avail) != expected) ++failures;
    }
  }
  return result("algorithms.unweighted_ranking", failures == 0, failures);
}

StochasticInstance reduction_instance(Reduction reduction, std::uint64_t seed) {
  Rng rng(seed);
  ProbClass cls = ProbClass::kGeneral;
  switch (reduction) {
    case Reduction::kIdentical:
      cls = rng.uniform() < 0.5 ? ProbClass::kIdentical : ProbClass::kArrivalUniform;
      break;
    case Reduction::kArrivalSide: cls = ProbClass::kDecomposable; break;
    case Reduction::kBudgets: cls = ProbClass::kResourceUniform; break;
    case Reduction::kCorrelated: cls = ProbClass::kResourceUniform; break;
  }
  return gen_random(small_family(rng, cls), rng.next());
}

CorrelatedInstance correlated_reduction_instance(std::uint64_t seed) {
  Rng rng(seed);
  const RandomFamily f = small_family(rng, ProbClass::kResourceUniform);
  return gen_random_correlated(f, draw_int(rng, 1, 4), rng.next());
}

std::vector<PolicySpec> battery_policies(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<PolicySpec> out{PolicySpec::greedy()};
  for (int k = 0; k < count; ++k) {
    out.push_back(PolicySpec::perturbed(PerturbationVector::draw(n, rng).y));
  }
  return out;
}

PreservationBattery preservation_battery(Reduction reduction, int instances,
                                         std::uint64_t seed) {
  PreservationBattery out;
  for (int k = 0; k < instances; ++k) {
    const std::uint64_t inst_seed = derive_seed(seed, 2 * k);
    const std::uint64_t policy_seed = derive_seed(seed, 2 * k + 1);
    if (reduction == Reduction::kCorrelated) {
      const auto inst = correlated_reduction_instance(inst_seed);
      for (const PolicySpec& p :
           battery_policies(inst.graph.num_resources(), 5, policy_seed)) {
        const auto c = check_value_preservation(inst, p);
        out.max_diff = std::max(out.max_diff, c.diff);
        out.max_weight_error = std::max(out.max_weight_error, std::abs(c.weight_total - 1.0));
        ++out.checks;
      }
    } else {
      const auto inst = reduction_instance(reduction, inst_seed);
      for (const PolicySpec& p : battery_policies(inst.num_resources(), 5, policy_seed)) {
        const auto c = check_value_preservation(inst, reduction, p);
        out.max_diff = std::max(out.max_diff, c.diff);
        out.max_weight_error = std::max(out.max_weight_error, std::abs(c.weight_total - 1.0));
        ++out.checks;
      }
    }
  }
  return out;
}

PreservationBattery composition_battery(int instances, std::uint64_t seed) {
  PreservationBattery out;
  for (int k = 0; k < instances; ++k) {
    const auto inst = reduction_instance(Reduction::kArrivalSide, derive_seed(seed, 2 * k));
    for (const PolicySpec& p :
         battery_policies(inst.num_resources(), 5, derive_seed(seed, 2 * k + 1))) {
      const auto c = check_composed_preservation(inst, p);
      out.max_diff = std::max(out.max_diff, c.diff);
      out.max_weight_error = std::max(out.max_weight_error, std::abs(c.weight_total - 1.0));
      ++out.checks;
    }
  }
  return out;
}

std::vector<StochasticInstance> decomposable_battery(int count, std::uint64_t seed) {
  std::vector<StochasticInstance> out;
  for (int k = 0; k < count; ++k) {
    Rng rng(derive_seed(seed, k));
    RandomFamily f = small_family(rng, ProbClass::kDecomposable);
    f.n = draw_int(rng, 2, 4);
    out.push_back(gen_random(f, rng.next()));
  }
  return out;
}

std::vector<PropertyResult> property_suite(std::uint64_t seed, int workers) {
  const auto s = [seed](std::uint64_t k) { return derive_seed(seed, k); };
  std::vector<PropertyResult> out;
  out.push_back(classify_decomposable(s(1)));
  out.push_back(serialization_round_trip(s(2)));
  out.push_back(adwords_budget_total(s(3)));
  out.push_back(argmax_scale_invariance(s(4)));
  out.push_back(ranking_property(
      s(5), [](const StochasticInstance& inst, ArrivalId t, std::span<const double> y,
               std::span<const std::uint8_t> avail) { return pg_select(inst, t, y, avail); }));
  out.push_back(replay_reproduces_trace(s(6)));
  out.push_back(accounting_identity(s(7)));
  out.push_back(budget_feasibility(s(8)));
  out.push_back(dp_matches_matching(s(9)));
  out.push_back(dp_monotone(s(10)));
  out.push_back(dp_dominates_policies(s(11)));
  out.push_back(bmatching_unit_budgets(s(12)));
  out.push_back(identical_mixture(s(13)));
  for (Reduction r : {Reduction::kIdentical, Reduction::kArrivalSide, Reduction::kBudgets,
                      Reduction::kCorrelated}) {
    out.push_back(preservation_property(r, s(14 + static_cast<int>(r))));
  }
  out.push_back(composition_property(s(18)));
  out.push_back(sampling_consistency(s(19)));
  out.push_back(hard_coupling(s(20)));
  out.push_back(class_specificity(s(21)));
  out.push_back(hard_weight_bounds());
  out.push_back(parallel_determinism(s(22), workers));
  out.push_back(estimator_equivalence_exact(s(23)));
  out.push_back(estimator_equivalence_mc(s(24), workers));
  out.push_back(greedy_half(s(25)));
  out.push_back(pg_deterministic(s(26), workers));
  return out;
}

}  // namespace stochmatch
