#include "stochmatch/harness.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stochmatch/oracles.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/summation.hpp"

namespace stochmatch {

namespace {

const char* variant_name(const AnyInstance& instance) {
  if (std::holds_alternative<StochasticInstance>(instance)) return "stochastic";
  if (std::holds_alternative<CorrelatedInstance>(instance)) return "correlated";
  return std::get<BudgetedInstance>(instance).kind == BudgetKind::kBMatching
             ? "bmatching"
             : "adwords";
}

bool compatible(AlgorithmId algorithm, const AnyInstance& instance) {
  switch (algorithm) {
    case AlgorithmId::kPerturbedGreedy:
    case AlgorithmId::kGreedy:
      return std::holds_alternative<StochasticInstance>(instance);
    case AlgorithmId::kPgCorrelated:
      return std::holds_alternative<CorrelatedInstance>(instance);
    case AlgorithmId::kPgBMatching:
      return std::holds_alternative<BudgetedInstance>(instance) &&
             std::get<BudgetedInstance>(instance).kind == BudgetKind::kBMatching;
    case AlgorithmId::kPgAdwords:
      return std::holds_alternative<BudgetedInstance>(instance) &&
             std::get<BudgetedInstance>(instance).kind == BudgetKind::kAdwords;
  }
  return false;
}

}  // namespace

std::string_view to_string(Accounting mode) {
  return mode == Accounting::kRealized ? "realized" : "expected";
}

std::optional<Accounting> parse_accounting(std::string_view text) {
  if (text == "realized") return Accounting::kRealized;
  if (text == "expected") return Accounting::kExpected;
  return std::nullopt;
}

Estimate summarize(const std::vector<double>& values, std::uint64_t master_seed,
                   Accounting mode, double z) {
  if (values.empty()) throw std::invalid_argument("at least one replication is required");
  Estimate e;
  e.replications = values.size();
  e.master_seed = master_seed;
  e.mode = mode;
  e.z = z;
  e.ci_level = std::erf(z / std::sqrt(2.0));

  const double r = static_cast<double>(values.size());
  e.mean = compensated_sum(values) / r;
  if (values.size() > 1) {
    CompensatedSum squares;
    for (double v : values) squares.add((v - e.mean) * (v - e.mean));
    e.std_error = std::sqrt(squares.value() / (r - 1.0)) / std::sqrt(r);
  }
  e.ci_lo = e.mean - z * e.std_error;
  e.ci_hi = e.mean + z * e.std_error;
  return e;
}

ReplicationRunner::ReplicationRunner(AlgorithmId algorithm, const AnyInstance& instance)
    : algorithm_(algorithm), instance_(&instance) {
  if (!compatible(algorithm, instance)) {
    throw std::invalid_argument(std::string("algorithm ") +
                                std::string(to_string(algorithm)) +
                                " does not apply to a " + variant_name(instance) +
                                " instance");
  }
  if (const auto* s = std::get_if<StochasticInstance>(&instance)) {
    coeffs_ = EdgeCoefficients::expected_reward(*s);
  } else if (const auto* c = std::get_if<CorrelatedInstance>(&instance)) {
    coeffs_ = EdgeCoefficients::expected_reward(c->graph);
    for (const ArrivalAtom& atom : c->support) {
      atom_scales_.emplace_back(atom.bits.begin(), atom.bits.end());
    }
  } else {
    coeffs_ = EdgeCoefficients::bids(std::get<BudgetedInstance>(instance));
  }
}

// Same draw order as run_perturbed_greedy, run_greedy, run_pg_bmatching,
// run_pg_adwords and run_on_correlated.
RunTrace ReplicationRunner::trace(std::uint64_t seed) const {
  Rng rng(seed);
  switch (algorithm_) {
    case AlgorithmId::kGreedy: {
      BernoulliOutcomes outcomes(rng);
      return run_policy(std::get<StochasticInstance>(*instance_),
                        PriorityPolicy(coeffs_), outcomes);
    }
    case AlgorithmId::kPerturbedGreedy: {
      const auto& inst = std::get<StochasticInstance>(*instance_);
      const auto y = PerturbationVector::draw(inst.num_resources(), rng);
      BernoulliOutcomes outcomes(rng);
      return run_policy(inst, PriorityPolicy(coeffs_, perturbation_multipliers(y.y)),
                        outcomes);
    }
    case AlgorithmId::kPgBMatching:
    case AlgorithmId::kPgAdwords: {
      const auto& inst = std::get<BudgetedInstance>(*instance_);
      const auto y = PerturbationVector::draw(inst.num_resources(), rng);
      return run_budgeted(inst, PriorityPolicy(coeffs_, perturbation_multipliers(y.y)));
    }
    case AlgorithmId::kPgCorrelated: {
      const auto& inst = std::get<CorrelatedInstance>(*instance_);
      const auto y = PerturbationVector::draw(inst.graph.num_resources(), rng);
      const std::size_t atom = pick_atom(inst, rng.uniform());
      CorrelatedOutcomes outcomes(inst, inst.support[atom].bits, rng);
      return run_policy(inst.graph,
                        PriorityPolicy(coeffs_, perturbation_multipliers(y.y)),
                        outcomes, atom_scales_[atom]);
    }
  }
  throw std::logic_error("unknown algorithm");
}

double ReplicationRunner::value(std::uint64_t seed, Accounting mode) const {
  const RunTrace t = trace(seed);
  return mode == Accounting::kRealized ? t.realized_total : t.expected_total;
}

std::vector<double> replicate_serial(const ReplicationRunner& runner,
                                     std::uint64_t replications,
                                     std::uint64_t master_seed, Accounting mode) {
  std::vector<double> values(replications);
  for (std::uint64_t r = 0; r < replications; ++r) {
    values[r] = runner.value(derive_seed(master_seed, r), mode);
  }
  return values;
}

std::vector<double> replicate(const ReplicationRunner& runner,
                              std::uint64_t replications, std::uint64_t master_seed,
                              Accounting mode, int workers) {
  if (workers <= 1) return replicate_serial(runner, replications, master_seed, mode);
  std::vector<double> values(replications);
  const auto count = static_cast<std::int64_t>(replications);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 256)
  for (std::int64_t r = 0; r < count; ++r) {
    values[r] = runner.value(derive_seed(master_seed, static_cast<std::uint64_t>(r)), mode);
  }
  return values;
}

Estimate estimate_value(AlgorithmId algorithm, const AnyInstance& instance,
                        std::uint64_t replications, std::uint64_t master_seed,
                        Accounting mode, int workers) {
  if (replications == 0) throw std::invalid_argument("at least one replication is required");
  const ReplicationRunner runner(algorithm, instance);
  return summarize(replicate(runner, replications, master_seed, mode, workers),
                   master_seed, mode);
}

std::string_view to_string(OracleKind oracle) {
  switch (oracle) {
    case OracleKind::kDp: return "dp";
    case OracleKind::kMatching: return "matching";
    case OracleKind::kBMatching: return "bmatching";
    case OracleKind::kAdwordsHard: return "adwords-hard";
    case OracleKind::kValue: return "value";
  }
  return "dp";
}

std::optional<OracleKind> parse_oracle(std::string_view text) {
  for (OracleKind k : {OracleKind::kDp, OracleKind::kMatching, OracleKind::kBMatching,
                       OracleKind::kAdwordsHard, OracleKind::kValue}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

double oracle_value(const AnyInstance& instance, const OracleSpec& oracle) {
  const auto wrong = [&] {
    return std::invalid_argument(std::string("oracle ") +
                                 std::string(to_string(oracle.kind)) +
                                 " does not apply to a " + variant_name(instance) +
                                 " instance");
  };
  switch (oracle.kind) {
    case OracleKind::kDp:
      if (const auto* s = std::get_if<StochasticInstance>(&instance)) {
        return opt_nonanticipative(*s);
      }
      throw wrong();
    case OracleKind::kMatching:
      if (const auto* s = std::get_if<StochasticInstance>(&instance)) {
        return opt_deterministic_matching(*s);
      }
      throw wrong();
    case OracleKind::kBMatching: {
      const auto* b = std::get_if<BudgetedInstance>(&instance);
      if (!b || b->kind != BudgetKind::kBMatching) throw wrong();
      return opt_bmatching(*b);
    }
    case OracleKind::kAdwordsHard: {
      const auto* b = std::get_if<BudgetedInstance>(&instance);
      if (!b || b->kind != BudgetKind::kAdwords) throw wrong();
      return opt_adwords_hard(b->num_resources() - 1, oracle.eps);
    }
    case OracleKind::kValue:
      return oracle.value;
  }
  throw wrong();
}

RatioEstimate make_ratio(const Estimate& alg, double opt) {
  if (!(opt > 0.0)) throw std::invalid_argument("oracle value must be positive");
  RatioEstimate r;
  r.alg = alg;
  r.opt = opt;
  r.ratio = alg.mean / opt;
  r.ratio_std_error = alg.std_error / opt;
  r.ratio_conservative = (alg.mean - alg.z * alg.std_error) / opt;
  return r;
}

RatioEstimate estimate_ratio(AlgorithmId algorithm, const AnyInstance& instance,
                             const OracleSpec& oracle, std::uint64_t replications,
                             std::uint64_t master_seed, Accounting mode, int workers) {
  const double opt = oracle_value(instance, oracle);
  return make_ratio(
      estimate_value(algorithm, instance, replications, master_seed, mode, workers), opt);
}

std::vector<HardnessRow> hardness_sweep(const std::vector<int>& ns, double eps,
                                        std::optional<double> p_override,
                                        std::uint64_t replications,
                                        std::uint64_t master_seed, int workers) {
  std::vector<HardnessRow> rows;
  for (int n : ns) {
    HardnessRow row;
    row.n = n;
    const HardInstanceParams params{n, eps, p_override};
    row.p = params.edge_scale();
    row.seed = derive_seed(master_seed, static_cast<std::uint64_t>(n));

    const AnyInstance stoch = gen_hard_stochastic(params);
    const AnyInstance adwords = gen_hard_adwords(n, eps);
    row.stoch = estimate_value(AlgorithmId::kPerturbedGreedy, stoch, replications,
                               row.seed, Accounting::kExpected, workers);
    row.adwords = estimate_value(AlgorithmId::kPgAdwords, adwords, replications,
                                 row.seed, Accounting::kExpected, workers);
    row.opt_star = opt_adwords_hard(n, eps);
    row.ratio_stoch = row.stoch.mean / row.opt_star;
    row.ratio_adwords = row.adwords.mean / row.opt_star;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace stochmatch
