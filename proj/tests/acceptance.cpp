// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "stochmatch/algorithms.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/harness.hpp"
#include "stochmatch/io.hpp"
#include "stochmatch/oracles.hpp"
#include "stochmatch/properties.hpp"
#include "stochmatch/random.hpp"
#include "stochmatch/reductions.hpp"

using namespace stochmatch;

namespace {

const double kOneMinusInvE = 1.0 - std::exp(-1.0);
constexpr std::uint64_t kSeed = 20261015;
constexpr std::uint64_t kReps = 100000;

int failures = 0;

void report(int id, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %d: %s  %s  [%.1fs]\n", id, ok ? "PASS" : "FAIL", detail.c_str(),
              seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

ResultRow row_of(const std::string& experiment, const std::string& id,
                 const StochasticInstance& inst, const std::string& algorithm,
                 const Estimate& e) {
  ResultRow row;
  row.experiment = experiment;
  row.instance_id = id;
  row.algorithm = algorithm;
  row.n = inst.num_resources();
  row.m = inst.num_arrivals();
  row.replications = e.replications;
  row.seed = e.master_seed;
  row.mode = std::string(to_string(e.mode));
  row.mean = e.mean;
  row.std_error = e.std_error;
  row.ci_lo = e.ci_lo;
  row.ci_hi = e.ci_hi;
  return row;
}

// Decomposable battery shared by criteria 2, 6 and 8.
const std::vector<StochasticInstance>& battery() {
  static const auto b = decomposable_battery(50, derive_seed(kSeed, 2));
  return b;
}

// One row per battery instance: quadrature PG value against the DP benchmark.
std::string decomposable_csv(int workers, double* min_ratio) {
  std::vector<ResultRow> rows;
  double lowest = 1e300;
  for (std::size_t k = 0; k < battery().size(); ++k) {
    const auto& inst = battery()[k];
    const double pg = exact_pg_value(inst, PgValueMode::kQuadrature,
                                     kDefaultQuadraturePoints, workers);
    const double opt = opt_nonanticipative(inst);
    Estimate e;
    e.mean = pg;
    e.ci_lo = e.ci_hi = pg;
    e.mode = Accounting::kRealized;
    ResultRow row = row_of("decomposable", "d" + std::to_string(k), inst, "pg-quadrature", e);
    row.opt = opt;
    row.ratio = pg / opt;
    row.ratio_conservative = (pg - 2e-3) / opt;
    lowest = std::min(lowest, *row.ratio_conservative);
    rows.push_back(row);
  }
  if (min_ratio) *min_ratio = lowest;
  return csv_table(rows);
}

std::vector<StochasticInstance> large_instances() {
  std::vector<StochasticInstance> out;
  const std::uint64_t base = derive_seed(kSeed, 4);
  RandomFamily f;
  f.n = 12;
  f.m = 30;
  f.density = 0.4;
  f.prob_class = ProbClass::kGeneral;
  out.push_back(gen_random(f, derive_seed(base, 0)));
  out.push_back(gen_random(f, derive_seed(base, 1)));
  f.prob_class = ProbClass::kDecomposable;
  out.push_back(gen_random(f, derive_seed(base, 2)));
  out.push_back(gen_hard_stochastic({20, kHardEps, 0.01}));
  out.push_back(gen_omniscient_separator(10));
  return out;
}

// Realized and expected accounting on independent seeds.
std::string estimator_csv(int workers, double* worst_z) {
  std::vector<ResultRow> rows;
  double z = 0.0;
  const auto insts = large_instances();
  for (std::size_t k = 0; k < insts.size(); ++k) {
    const AnyInstance inst = insts[k];
    const auto seed = derive_seed(kSeed, 400 + k);
    const auto realized = estimate_value(AlgorithmId::kPerturbedGreedy, inst, kReps,
                                         derive_seed(seed, 0), Accounting::kRealized, workers);
    const auto expected = estimate_value(AlgorithmId::kPerturbedGreedy, inst, kReps,
                                         derive_seed(seed, 1), Accounting::kExpected, workers);
    const double se = std::hypot(realized.std_error, expected.std_error);
    const double gap = std::abs(realized.mean - expected.mean);
    z = std::max(z, se > 0.0 ? gap / se : (gap > 0.0 ? 1e300 : 0.0));
    rows.push_back(row_of("estimator", "L" + std::to_string(k), insts[k], "pg", realized));
    rows.push_back(row_of("estimator", "L" + std::to_string(k), insts[k], "pg", expected));
  }
  if (worst_z) *worst_z = z;
  return csv_table(rows);
}

std::string hardness_csv(const std::vector<HardnessRow>& rows) {
  std::string out = hardness_header() + "\n";
  for (const auto& r : rows) out += hardness_line(r) + "\n";
  return out;
}

void criterion1() {
  Timer timer;
  double worst = 1e300;
  for (int n = 2; n <= 8; ++n) {
    worst = std::min(worst, exact_pg_value(gen_kvv_triangular(n), PgValueMode::kPermutations) / n);
  }
  report(1, worst >= kOneMinusInvE - 1e-9, fmt("min_n PG/n = %.9f", worst) +
         fmt(" vs 1-1/e = %.9f", kOneMinusInvE), timer.seconds());
}

void criterion2(double min_ratio, double seconds) {
  report(2, min_ratio >= kOneMinusInvE - 2e-3,
         fmt("50 instances, min (PG - 2e-3)/DP = %.6f", min_ratio) +
             fmt(" >= %.6f", kOneMinusInvE - 2e-3),
         seconds);
}

void criterion3() {
  Timer timer;
  bool ok = true;
  std::string detail;
  for (Reduction r : {Reduction::kIdentical, Reduction::kArrivalSide, Reduction::kBudgets,
                      Reduction::kCorrelated}) {
    const auto b = preservation_battery(r, 50, derive_seed(kSeed, 30 + static_cast<int>(r)));
    ok = ok && b.max_diff <= 1e-9 && b.checks == 300;
    detail += std::string(to_string(r)) + fmt(" %.2e ", b.max_diff);
  }
  report(3, ok, "max |lhs-rhs|: " + detail, timer.seconds());
}

void criterion4(double worst_z, double seconds_mc) {
  Timer timer;
  double worst_gap = 0.0;
  Rng rng(derive_seed(kSeed, 41));
  for (int k = 0; k < 20; ++k) {
    RandomFamily f;
    f.n = 2 + static_cast<int>(rng.uniform() * 3);
    f.m = 2 + static_cast<int>(rng.uniform() * 4);
    f.density = 0.5 + 0.5 * rng.uniform();
    const auto policies = battery_policies(f.n, 2, rng.next());
    if (k % 4 == 3) {
      const auto inst = gen_random_correlated(f, 3, rng.next());
      for (const auto& p : policies) {
        const auto v = exact_policy_value(inst, p.on(inst.graph));
        worst_gap = std::max(worst_gap, std::abs(v.realized - v.expected));
      }
    } else {
      const auto inst = gen_random(f, rng.next());
      for (const auto& p : policies) {
        const auto v = exact_policy_value(inst, p.on(inst));
        worst_gap = std::max(worst_gap, std::abs(v.realized - v.expected));
      }
    }
  }
  report(4, worst_gap <= 1e-9 && worst_z <= 4.0,
         fmt("exact max gap %.2e", worst_gap) + fmt(", MC max |diff|/se = %.2f (<= 4)", worst_z),
         timer.seconds() + seconds_mc);
}

void criterion5(const std::vector<HardnessRow>& rows, double seconds) {
  bool ok = true;
  std::string detail;
  const auto se = [](const HardnessRow& r) { return r.adwords.std_error / r.opt_star; };
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    detail += "n=" + std::to_string(r.n) + fmt(" %.6f", r.ratio_adwords);
    if (k + 1 < rows.size()) {
      const double slack = 4.0 * std::hypot(se(r), se(rows[k + 1]));
      ok = ok && rows[k + 1].ratio_adwords < r.ratio_adwords + slack;
    }
    const double band = 5.0 * r.n * r.p;
    const bool close = std::abs(r.ratio_stoch / r.ratio_adwords - 1.0) <= band;
    ok = ok && close;
    detail += fmt(" (stoch/adw-1 = %.1e); ", r.ratio_stoch / r.ratio_adwords - 1.0);
  }
  ok = ok && !rows.empty() && rows.back().ratio_adwords <= 0.64;
  report(5, ok, detail + "last <= 0.64", seconds);
}

void criterion6() {
  Timer timer;
  double worst = 1e300;
  for (const auto& inst : battery()) {
    const double greedy = exact_policy_value(inst, greedy_policy(inst)).realized;
    worst = std::min(worst, greedy - 0.5 * opt_nonanticipative(inst));
  }
  report(6, worst >= -1e-9, fmt("min (Greedy - DP/2) = %.6f", worst), timer.seconds());
}

void criterion7() {
  Timer timer;
  const auto inst = gen_omniscient_separator(10);
  const double opt = opt_nonanticipative(inst);
  const double omni = omniscient_separator_value(10);
  const double closed = 1.0 - std::pow(0.9, 10);
  const bool ok = std::abs(opt - 0.1) <= 1e-12 && std::abs(omni - closed) <= 1e-15 &&
                  std::abs(omni - 0.651322) <= 5e-7;
  report(7, ok, fmt("opt_nonanticipative = %.12f", opt) + fmt(", omniscient = %.10f", omni) +
                    fmt(", ratio = %.9f", opt / omni),
         timer.seconds());
}

}  // namespace

int main() {
  std::printf("master seed %llu, R = %llu\n", static_cast<unsigned long long>(kSeed),
              static_cast<unsigned long long>(kReps));

  criterion1();

  Timer t2;
  double min_ratio = 0.0;
  const std::string decomposable_1 = decomposable_csv(1, &min_ratio);
  criterion2(min_ratio, t2.seconds());

  criterion3();

  Timer t4;
  double worst_z = 0.0;
  const std::string estimator_1 = estimator_csv(1, &worst_z);
  criterion4(worst_z, t4.seconds());

  Timer t5;
  const auto hardness = hardness_sweep({50, 100, 200, 400}, kHardEps, std::nullopt, kReps,
                                       derive_seed(kSeed, 5), 1);
  criterion5(hardness, t5.seconds());

  criterion6();
  criterion7();

  // Batteries of criteria 2 and 4, and the two smallest hardness rows, with 8
  // workers against the single-worker output above.
  Timer t8;
  const std::string decomposable_8 = decomposable_csv(8, nullptr);
  const std::string estimator_8 = estimator_csv(8, nullptr);
  const auto hardness_8 = hardness_sweep({50, 100}, kHardEps, std::nullopt, kReps,
                                         derive_seed(kSeed, 5), 8);
  const std::vector<HardnessRow> hardness_1(hardness.begin(), hardness.begin() + 2);
  const bool same_dec = decomposable_1 == decomposable_8;
  const bool same_est = estimator_1 == estimator_8;
  const bool same_hard = hardness_csv(hardness_1) == hardness_csv(hardness_8);
  report(8, same_dec && same_est && same_hard,
         std::string("decomposable ") + (same_dec ? "identical" : "differs") + ", estimator " +
             (same_est ? "identical" : "differs") + ", hardness " +
             (same_hard ? "identical" : "differs") + " (" +
             std::to_string(decomposable_1.size() + estimator_1.size()) + " bytes)",
         t8.seconds());

  std::printf("%s\n", failures == 0 ? "all criteria passed" : "some criteria failed");
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
