#include "stochmatch/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/harness.hpp"
#include "stochmatch/io.hpp"
#include "stochmatch/oracles.hpp"
#include "stochmatch/properties.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/reductions.hpp"

namespace stochmatch {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t need_seed(const std::optional<std::uint64_t>& seed, const char* why) {
  if (!seed) throw UsageError(std::string("--seed is required ") + why);
  return *seed;
}

AlgorithmId need_algorithm(const std::string& text) {
  auto a = parse_algorithm(text);
  if (!a) throw UsageError("unknown algorithm '" + text + "'");
  return *a;
}

Accounting need_mode(const std::string& text) {
  auto m = parse_accounting(text);
  if (!m) throw UsageError("unknown mode '" + text + "' (realized or expected)");
  return *m;
}

std::string class_label(const AnyInstance& instance) {
  if (const auto* s = std::get_if<StochasticInstance>(&instance)) {
    return std::string(to_string(classify(*s).cls));
  }
  if (const auto* c = std::get_if<CorrelatedInstance>(&instance)) {
    return "correlated/" + std::string(to_string(classify(c->graph).cls));
  }
  return std::string(kind_name(instance));
}

void dims(const AnyInstance& instance, int& n, int& m, std::size_t& edges) {
  std::visit(
      [&](const auto& x) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, CorrelatedInstance>) {
          n = x.graph.num_resources();
          m = x.graph.num_arrivals();
          edges = x.graph.num_edges();
        } else {
          n = x.num_resources();
          m = x.num_arrivals();
          edges = x.num_edges();
        }
      },
      instance);
}

// Appends CSV rows to `path`, writing the header when the file is new or empty.
void append_csv(const std::string& path, const std::vector<std::string>& lines,
                const std::string& header) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream f(path, std::ios::app);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  if (fresh) f << header << "\n";
  for (const auto& l : lines) f << l << "\n";
}

ResultRow row_for(const std::string& experiment, const std::string& instance_id,
                  AlgorithmId algorithm, const AnyInstance& instance, const Estimate& e) {
  ResultRow row;
  row.experiment = experiment;
  row.instance_id = instance_id;
  row.algorithm = std::string(to_string(algorithm));
  std::size_t edges = 0;
  dims(instance, row.n, row.m, edges);
  row.replications = e.replications;
  row.seed = e.master_seed;
  row.mode = std::string(to_string(e.mode));
  row.mean = e.mean;
  row.std_error = e.std_error;
  row.ci_lo = e.ci_lo;
  row.ci_hi = e.ci_hi;
  return row;
}

struct Options {
  // shared
  std::string instance_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  std::uint64_t reps = 0;
  std::string algorithm = "pg";
  std::string mode = "realized";
  std::string experiment;
  // gen
  std::string family;
  int n = 0;
  int m = 0;
  double eps = kHardEps;
  std::optional<double> p;
  std::string prob_class = "general";
  double density = 1.0;
  int support = 2;
  // opt / ratio
  std::string oracle = "dp";
  std::optional<double> value;
  // reduce
  std::string lemma;
  std::string reduce_mode = "check";
  std::string policy = "greedy";
  // hardness
  std::vector<int> ns;
};

int cmd_gen(const Options& o, std::ostream& out) {
  AnyInstance inst;
  const std::string& f = o.family;
  if (f == "kvv") {
    inst = gen_kvv_triangular(o.n);
  } else if (f == "hard-stoch") {
    inst = gen_hard_stochastic({o.n, o.eps, o.p});
  } else if (f == "hard-adwords") {
    inst = gen_hard_adwords(o.n, o.eps);
  } else if (f == "separator") {
    inst = gen_omniscient_separator(o.n);
  } else if (f == "random" || f == "random-correlated") {
    const std::uint64_t seed = need_seed(o.seed, "for random families");
    RandomFamily fam;
    fam.n = o.n;
    fam.m = o.m;
    fam.density = o.density;
    auto cls = parse_prob_class(o.prob_class);
    if (!cls) throw UsageError("unknown class '" + o.prob_class + "'");
    fam.prob_class = *cls;
    if (f == "random") {
      inst = gen_random(fam, seed);
    } else {
      inst = gen_random_correlated(fam, o.support, seed);
    }
  } else {
    throw UsageError("unknown family '" + f + "'");
  }
  save_instance(o.out_path, inst);
  int n = 0, m = 0;
  std::size_t edges = 0;
  dims(inst, n, m, edges);
  out << "kind=" << kind_name(inst) << " n=" << n << " m=" << m << " edges=" << edges
      << " class=" << class_label(inst) << "\n";
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const std::uint64_t seed = need_seed(o.seed, "for simulate");
  const AnyInstance inst = load_instance(o.instance_path);
  const AlgorithmId alg = need_algorithm(o.algorithm);
  const Estimate e = estimate_value(alg, inst, o.reps, seed, need_mode(o.mode), o.workers);
  const std::string line = csv_line(
      row_for(o.experiment.empty() ? "simulate" : o.experiment, o.instance_path, alg, inst, e));
  out << csv_header() << "\n" << line << "\n";
  if (!o.out_path.empty()) append_csv(o.out_path, {line}, csv_header());
  return kExitOk;
}

OracleSpec oracle_spec(const Options& o) {
  auto kind = parse_oracle(o.oracle);
  if (!kind) throw UsageError("unknown oracle '" + o.oracle + "'");
  OracleSpec spec{*kind, o.eps, 0.0};
  if (*kind == OracleKind::kValue) {
    if (!o.value) throw UsageError("--value is required with --oracle value");
    spec.value = *o.value;
  }
  return spec;
}

int cmd_opt(const Options& o, std::ostream& out) {
  const AnyInstance inst = load_instance(o.instance_path);
  out << format_number(oracle_value(inst, oracle_spec(o))) << "\n";
  return kExitOk;
}

int cmd_ratio(const Options& o, std::ostream& out) {
  const std::uint64_t seed = need_seed(o.seed, "for ratio");
  const AnyInstance inst = load_instance(o.instance_path);
  const AlgorithmId alg = need_algorithm(o.algorithm);
  const RatioEstimate r =
      estimate_ratio(alg, inst, oracle_spec(o), o.reps, seed, need_mode(o.mode), o.workers);
  ResultRow row =
      row_for(o.experiment.empty() ? "ratio" : o.experiment, o.instance_path, alg, inst, r.alg);
  row.opt = r.opt;
  row.ratio = r.ratio;
  row.ratio_conservative = r.ratio_conservative;
  const std::string line = csv_line(row);
  out << csv_header() << "\n" << line << "\n";
  if (!o.out_path.empty()) append_csv(o.out_path, {line}, csv_header());
  return kExitOk;
}

PolicySpec policy_for(const Options& o, int n) {
  if (o.policy == "greedy") return PolicySpec::greedy();
  if (o.policy == "pg") {
    Rng rng(need_seed(o.seed, "to draw the fixed y of --policy pg"));
    return PolicySpec::perturbed(PerturbationVector::draw(n, rng).y);
  }
  throw UsageError("unknown policy '" + o.policy + "' (greedy or pg)");
}

int cmd_reduce(const Options& o, std::ostream& out) {
  const AnyInstance inst = load_instance(o.instance_path);
  const bool composed = o.lemma == "composed";
  const auto reduction = parse_reduction(o.lemma);
  if (!reduction && !composed) throw UsageError("unknown lemma '" + o.lemma + "'");
  const bool correlated = reduction == Reduction::kCorrelated;
  if (correlated != std::holds_alternative<CorrelatedInstance>(inst) ||
      std::holds_alternative<BudgetedInstance>(inst)) {
    throw UsageError("lemma " + o.lemma + " does not apply to a " +
                     std::string(kind_name(inst)) + " instance");
  }

  if (o.reduce_mode == "check") {
    PreservationCheck c;
    if (correlated) {
      const auto& ci = std::get<CorrelatedInstance>(inst);
      c = check_value_preservation(ci, policy_for(o, ci.graph.num_resources()));
    } else {
      const auto& si = std::get<StochasticInstance>(inst);
      const PolicySpec policy = policy_for(o, si.num_resources());
      c = composed ? check_composed_preservation(si, policy)
                   : check_value_preservation(si, *reduction, policy);
    }
    out << "lhs=" << format_number(c.lhs) << " rhs=" << format_number(c.rhs)
        << " diff=" << format_number(c.diff) << " samples=" << c.samples
        << " weight_total=" << format_number(c.weight_total) << "\n";
    return kExitOk;
  }
  if (o.reduce_mode == "sample") {
    if (composed) throw UsageError("sample mode takes a single lemma");
    const std::uint64_t seed = need_seed(o.seed, "for sample mode");
    AnyInstance reduced;
    switch (*reduction) {
      case Reduction::kIdentical:
        reduced = sample_identical(std::get<StochasticInstance>(inst), seed).reduced;
        break;
      case Reduction::kArrivalSide:
        reduced = sample_arrival_side(std::get<StochasticInstance>(inst), seed).reduced;
        break;
      case Reduction::kBudgets:
        reduced = sample_budgets(std::get<StochasticInstance>(inst), seed).reduced;
        break;
      case Reduction::kCorrelated:
        reduced = sample_correlated(std::get<CorrelatedInstance>(inst), seed).reduced;
        break;
    }
    if (o.out_path.empty()) {
      out << dump_instance(reduced);
    } else {
      save_instance(o.out_path, reduced);
      int n = 0, m = 0;
      std::size_t edges = 0;
      dims(reduced, n, m, edges);
      out << "kind=" << kind_name(reduced) << " n=" << n << " m=" << m
          << " edges=" << edges << "\n";
    }
    return kExitOk;
  }
  throw UsageError("unknown reduce mode '" + o.reduce_mode + "' (check or sample)");
}

int cmd_hardness(const Options& o, std::ostream& out) {
  const std::uint64_t seed = need_seed(o.seed, "for hardness");
  const auto rows = hardness_sweep(o.ns, o.eps, o.p, o.reps, seed, o.workers);
  std::vector<std::string> lines;
  for (const auto& r : rows) lines.push_back(hardness_line(r));
  out << hardness_header() << "\n";
  for (const auto& l : lines) out << l << "\n";
  if (!o.out_path.empty()) append_csv(o.out_path, lines, hardness_header());
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const std::uint64_t seed = need_seed(o.seed, "for verify");
  bool all = true;
  for (const PropertyResult& r : property_suite(seed, o.workers)) {
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << " measured=" << format_number(r.measured);
    if (!r.detail.empty()) out << " (" << r.detail << ")";
    out << "\n";
  }
  out << (all ? "all properties passed" : "some properties failed") << "\n";
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Online stochastic matching experiments", "stochmatch"};
  app.require_subcommand(1);

  const auto add_seed = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Master seed (all randomness derives from it)");
  };
  const auto add_workers = [&](CLI::App* c) {
    c->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* gen = app.add_subcommand("gen", "Generate an instance file");
  gen->add_option("--family", o.family,
                  "kvv, hard-stoch, hard-adwords, separator, random, random-correlated")
      ->required();
  gen->add_option("--n", o.n, "Number of resources")->required();
  gen->add_option("--m", o.m, "Number of arrivals (random families)");
  gen->add_option("--eps", o.eps, "Epsilon of the hard families");
  gen->add_option("--p", o.p, "Edge scale of hard-stoch (default 1/n^2)");
  gen->add_option("--class", o.prob_class, "Probability class (random families)");
  gen->add_option("--density", o.density, "Edge density (random families)");
  gen->add_option("--support", o.support, "Support size (random-correlated)");
  gen->add_option("--out", o.out_path, "Output instance file")->required();
  add_seed(gen);

  auto* sim = app.add_subcommand("simulate", "Estimate an algorithm's expected value");
  sim->add_option("--instance", o.instance_path)->required();
  sim->add_option("--algorithm", o.algorithm, "pg, greedy, pg-bmatch, pg-adwords, pg-corr");
  sim->add_option("--reps", o.reps, "Replications")->required()->check(CLI::PositiveNumber);
  sim->add_option("--mode", o.mode, "realized or expected");
  sim->add_option("--out", o.out_path, "Append the row to this CSV file");
  sim->add_option("--experiment", o.experiment);
  add_seed(sim);
  add_workers(sim);

  auto* opt = app.add_subcommand("opt", "Exact offline benchmark value");
  opt->add_option("--instance", o.instance_path)->required();
  opt->add_option("--oracle", o.oracle, "dp, matching, bmatching, adwords-hard");
  opt->add_option("--eps", o.eps, "Epsilon of the hard Adwords family");

  auto* ratio = app.add_subcommand("ratio", "Estimate a competitive ratio");
  ratio->add_option("--instance", o.instance_path)->required();
  ratio->add_option("--algorithm", o.algorithm);
  ratio->add_option("--oracle", o.oracle, "dp, matching, bmatching, adwords-hard, value");
  ratio->add_option("--value", o.value, "Exact benchmark value for --oracle value");
  ratio->add_option("--eps", o.eps);
  ratio->add_option("--reps", o.reps)->required()->check(CLI::PositiveNumber);
  ratio->add_option("--mode", o.mode);
  ratio->add_option("--out", o.out_path);
  ratio->add_option("--experiment", o.experiment);
  add_seed(ratio);
  add_workers(ratio);

  auto* reduce = app.add_subcommand("reduce", "Value-preserving reductions");
  reduce->add_option("--lemma", o.lemma, "identical, arrival, budgets, correlated, composed")
      ->required();
  reduce->add_option("--mode", o.reduce_mode, "check or sample");
  reduce->add_option("--instance", o.instance_path)->required();
  reduce->add_option("--policy", o.policy, "greedy or pg (fixed y drawn from --seed)");
  reduce->add_option("--out", o.out_path, "Reduced instance file (sample mode)");
  add_seed(reduce);

  auto* hard = app.add_subcommand("hardness", "Hard-instance sweep");
  hard->add_option("--n", o.ns, "Comma-separated sizes")->required()->delimiter(',');
  hard->add_option("--eps", o.eps);
  hard->add_option("--p", o.p, "Edge scale (default 1/n^2)");
  hard->add_option("--reps", o.reps)->required()->check(CLI::PositiveNumber);
  hard->add_option("--out", o.out_path);
  add_seed(hard);
  add_workers(hard);

  auto* verify = app.add_subcommand("verify", "Run the property suite");
  add_seed(verify);
  add_workers(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(o, out);
    if (*sim) return cmd_simulate(o, out);
    if (*opt) return cmd_opt(o, out);
    if (*ratio) return cmd_ratio(o, out);
    if (*reduce) return cmd_reduce(o, out);
    if (*hard) return cmd_hardness(o, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const GuardError& e) {
    err << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace stochmatch
