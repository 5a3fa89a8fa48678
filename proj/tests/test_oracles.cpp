#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stochmatch/assignment.hpp"
#include "stochmatch/errors.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/oracles.hpp"
#include "stochmatch/random.hpp"

namespace stochmatch {
namespace {

// Test-side oracles, written without sharing code with the library.

// Ranking on unit-weight deterministic graphs: average matched count over all
// rank orders of the resources.
double brute_ranking(const StochasticInstance& inst) {
  const int n = inst.num_resources();
  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  double total = 0.0;
  int orders = 0;
  do {
    std::vector<bool> used(n, false);
    int matched = 0;
    for (const auto& adj : inst.arrivals) {
      int best = -1;
      for (const Edge& e : adj) {
        if (!used[e.resource] && (best < 0 || rank[e.resource] < rank[best])) best = e.resource;
      }
      if (best >= 0) {
        used[best] = true;
        ++matched;
      }
    }
    total += matched;
    ++orders;
  } while (std::next_permutation(rank.begin(), rank.end()));
  return total / orders;
}

// Plain recursion over (remaining arrivals, free resources) without memo.
double brute_benchmark(const StochasticInstance& inst, std::vector<bool>& arrival_left,
                       std::vector<bool>& free) {
  double best = 0.0;
  for (int t = 0; t < inst.num_arrivals(); ++t) {
    if (!arrival_left[t]) continue;
    arrival_left[t] = false;
    best = std::max(best, brute_benchmark(inst, arrival_left, free));  // skip t
    for (const Edge& e : inst.arrivals[t]) {
      if (!free[e.resource]) continue;
      const double fail = brute_benchmark(inst, arrival_left, free);
      free[e.resource] = false;
      const double win = inst.weights[e.resource] + brute_benchmark(inst, arrival_left, free);
      free[e.resource] = true;
      best = std::max(best, e.prob * win + (1.0 - e.prob) * fail);
    }
    arrival_left[t] = true;
  }
  return best;
}

double brute_benchmark(const StochasticInstance& inst) {
  std::vector<bool> left(inst.num_arrivals(), true);
  std::vector<bool> free(inst.num_resources(), true);
  return brute_benchmark(inst, left, free);
}

double brute_matching(const std::vector<std::vector<double>>& w) {
  const int rows = static_cast<int>(w.size());
  const int cols = rows ? static_cast<int>(w[0].size()) : 0;
  std::vector<int> perm(std::max(rows, cols));
  std::iota(perm.begin(), perm.end(), 0);
  double best = 0.0;
  do {
    double v = 0.0;
    for (int r = 0; r < rows; ++r) {
      if (perm[r] < cols) v += std::max(0.0, w[r][perm[r]]);
    }
    best = std::max(best, v);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

TEST(OptNonanticipative, HandExamples) {
  EXPECT_DOUBLE_EQ(opt_nonanticipative(make_instance({1.0}, 1, {{0, 0, 0.7}})), 0.7);
  EXPECT_DOUBLE_EQ(opt_nonanticipative(make_instance({1.0}, 2, {{0, 0, 0.5}, {0, 1, 0.5}})),
                   0.75);
  EXPECT_DOUBLE_EQ(
      opt_nonanticipative(make_instance({1.0, 2.0}, 1, {{0, 0, 1.0}, {1, 0, 0.4}})), 1.0);
}

TEST(OptNonanticipative, SeparatorIsOneOverN) {
  EXPECT_NEAR(opt_nonanticipative(gen_omniscient_separator(10)), 0.1, 1e-15);
}

TEST(OptNonanticipative, MatchesPlainRecursion) {
  Rng rng(41);
  for (int k = 0; k < 60; ++k) {
    RandomFamily f;
    f.n = 1 + static_cast<int>(rng.uniform() * 3);
    f.m = 1 + static_cast<int>(rng.uniform() * 4);
    f.density = 0.8;
    const auto inst = gen_random(f, rng.next());
    EXPECT_NEAR(opt_nonanticipative(inst), brute_benchmark(inst), 1e-12);
  }
}

TEST(OptNonanticipative, OrderFreedomBeatsArrivalOrder) {
  // Attempting the risky arrival 1 first keeps the safe arrival 0 as a fallback.
  const auto inst = make_instance({1.0}, 2, {{0, 0, 1.0}, {0, 1, 0.5}});
  EXPECT_DOUBLE_EQ(opt_nonanticipative(inst), 1.0);
}

TEST(OptNonanticipative, Guard) {
  EXPECT_THROW(opt_nonanticipative(gen_kvv_triangular(21)), GuardError);
  RandomFamily f;
  f.n = 13;
  f.m = 12;
  f.density = 0.1;
  EXPECT_THROW(opt_nonanticipative(gen_random(f, 1)), GuardError);
  try {
    opt_nonanticipative(gen_kvv_triangular(25));
  } catch (const GuardError& e) {
    EXPECT_NE(std::string(e.what()).find("20"), std::string::npos);
  }
}

TEST(OptNonanticipative, EqualsMatchingOnDeterministic) {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    RandomFamily f;
    f.n = 1 + static_cast<int>(rng.uniform() * 6);
    f.m = 1 + static_cast<int>(rng.uniform() * 6);
    f.density = 0.6;
    f.prob_class = ProbClass::kDeterministic;
    const auto inst = gen_random(f, rng.next());
    EXPECT_NEAR(opt_nonanticipative(inst), opt_deterministic_matching(inst), 1e-9);
  }
}

TEST(OptDeterministicMatching, HandExamples) {
  EXPECT_DOUBLE_EQ(opt_deterministic_matching(make_instance({5.0}, 1, {{0, 0, 1.0}})), 5.0);
  EXPECT_DOUBLE_EQ(opt_deterministic_matching(gen_kvv_triangular(2)), 2.0);
  EXPECT_DOUBLE_EQ(opt_deterministic_matching(gen_kvv_triangular(3)), 3.0);
  const auto complete =
      make_instance({1.0, 3.0}, 2, {{0, 0, 1.0}, {1, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.0}});
  EXPECT_DOUBLE_EQ(opt_deterministic_matching(complete), 4.0);
}

TEST(OptDeterministicMatching, RejectsStochastic) {
  EXPECT_THROW(opt_deterministic_matching(make_instance({1.0}, 1, {{0, 0, 0.5}})),
               std::invalid_argument);
}

TEST(Assignment, MatchesPermutationSearch) {
  Rng rng(8);
  for (int k = 0; k < 100; ++k) {
    const int rows = 1 + static_cast<int>(rng.uniform() * 5);
    const int cols = 1 + static_cast<int>(rng.uniform() * 5);
    std::vector<std::vector<double>> w(rows, std::vector<double>(cols));
    for (auto& row : w) {
      for (double& v : row) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform(0.0, 3.0);
    }
    EXPECT_NEAR(max_weight_assignment(w), brute_matching(w), 1e-12);
  }
}

TEST(OptBMatching, HandExamples) {
  std::vector<std::pair<ResourceId, ArrivalId>> star;
  for (int t = 0; t < 5; ++t) star.emplace_back(0, t);
  EXPECT_DOUBLE_EQ(opt_bmatching(make_bmatching({1.0}, {3.0}, 5, star)), 3.0);

  std::vector<std::pair<ResourceId, ArrivalId>> both;
  for (int t = 0; t < 3; ++t) {
    both.emplace_back(0, t);
    both.emplace_back(1, t);
  }
  EXPECT_DOUBLE_EQ(opt_bmatching(make_bmatching({2.0, 1.0}, {1.0, 2.0}, 3, both)), 4.0);
}

TEST(OptBMatching, UnitBudgetsEqualMatching) {
  Rng rng(9);
  for (int k = 0; k < 40; ++k) {
    RandomFamily f;
    f.n = 4;
    f.m = 5;
    f.density = 0.5;
    f.prob_class = ProbClass::kDeterministic;
    const auto inst = gen_random(f, rng.next());
    std::vector<std::pair<ResourceId, ArrivalId>> pairs;
    for (ArrivalId t = 0; t < inst.num_arrivals(); ++t) {
      for (const Edge& e : inst.arrivals[t]) pairs.emplace_back(e.resource, t);
    }
    const auto b = make_bmatching(inst.weights, std::vector<double>(4, 1.0), 5, pairs);
    EXPECT_NEAR(opt_bmatching(b), opt_deterministic_matching(inst), 1e-9);
  }
}

TEST(OptAdwordsHard, OneResourceValue) {
  EXPECT_NEAR(opt_adwords_hard(1, 0.133), 1.6786414698692655, 1e-12);
  // The eps -> 0 limit of w(1).
  EXPECT_NEAR(opt_adwords_hard(1, 1e-12) - 1.0, 0.6224593312, 1e-9);
}

TEST(OptAdwordsHard, BelowTwoNPlusOne) {
  for (int n : {1, 2, 5, 50, 400}) EXPECT_LT(opt_adwords_hard(n, kHardEps), 2.0 * n + 1);
  EXPECT_NEAR(opt_adwords_hard(4, kHardEps), 4.0 + 2.6092367238657785, 1e-12);
}

TEST(ExactPolicyValue, GreedyOnTwoHalfCoins) {
  const auto inst = make_instance({1.0}, 2, {{0, 0, 0.5}, {0, 1, 0.5}});
  const auto v = exact_policy_value(inst, greedy_policy(inst));
  EXPECT_DOUBLE_EQ(v.realized, 0.75);
  EXPECT_DOUBLE_EQ(v.expected, 0.75);
}

TEST(ExactPolicyValue, DeterministicEqualsSinglePath) {
  const auto inst = gen_kvv_triangular(6);
  const std::vector<double> y{0.1, 0.9, 0.4, 0.5, 0.3, 0.2};
  const auto policy = perturbed_greedy_policy(inst, y);
  ReplayOutcomes ones(std::vector<std::uint8_t>(6, 1));
  EXPECT_DOUBLE_EQ(exact_policy_value(inst, policy).realized,
                   run_policy(inst, policy, ones).realized_total);
}

TEST(ExactPolicyValue, FixedYAgreesWithMonteCarlo) {
  RandomFamily f;
  f.n = 3;
  f.m = 5;
  const auto inst = gen_random(f, 77);
  const std::vector<double> y{0.2, 0.7, 0.5};
  const auto policy = perturbed_greedy_policy(inst, y);
  const double exact = exact_policy_value(inst, policy).realized;
  Rng rng(1);
  BernoulliOutcomes outcomes(rng);
  const int reps = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double v = run_policy(inst, policy, outcomes).realized_total;
    sum += v;
    sq += v * v;
  }
  const double mean = sum / reps;
  const double se = std::sqrt((sq / reps - mean * mean) / reps);
  EXPECT_LT(std::abs(mean - exact), 4.0 * se);
}

TEST(ExactPolicyValue, CorrelatedOneOfTwo) {
  const auto inst = make_correlated(make_instance({1.0}, 2, {{0, 0, 1.0}, {0, 1, 1.0}}),
                                    {1.0}, {{{1, 0}, 0.5}, {{0, 1}, 0.5}});
  const std::vector<double> y{0.5};
  const auto v = exact_policy_value(inst, perturbed_greedy_policy(inst.graph, y));
  EXPECT_DOUBLE_EQ(v.realized, 1.0);
  EXPECT_DOUBLE_EQ(v.expected, 1.0);
}

class FlakyPolicy final : public OnlinePolicy {
 public:
  std::optional<ResourceId> select(ArrivalId, std::span<const std::uint8_t>) const override {
    return (calls_++ % 2) ? std::optional<ResourceId>(0) : std::nullopt;
  }

 private:
  mutable int calls_ = 0;
};

TEST(ExactPolicyValue, RejectsNondeterministicPolicy) {
  const auto inst = make_instance({1.0}, 1, {{0, 0, 0.5}});
  EXPECT_THROW(exact_policy_value(inst, FlakyPolicy{}), std::invalid_argument);
}

TEST(ExactPolicyValue, BranchGuard) {
  // 21 arrivals on 21 resources with p = 0.5 gives more than 2^20 leaves.
  StochasticInstance inst;
  inst.weights.assign(21, 1.0);
  for (int t = 0; t < 21; ++t) inst.arrivals.push_back({{t, 0.5}});
  EXPECT_THROW(exact_policy_value(inst, greedy_policy(inst)), GuardError);
}

TEST(ExactPgValue, KvvPermutations) {
  EXPECT_DOUBLE_EQ(exact_pg_value(gen_kvv_triangular(2), PgValueMode::kPermutations), 1.5);
  // Orders of y: only the identity order matches all three arrivals.
  EXPECT_NEAR(exact_pg_value(gen_kvv_triangular(3), PgValueMode::kPermutations), 13.0 / 6.0,
              1e-12);
  for (int n = 1; n <= 7; ++n) {
    const auto inst = gen_kvv_triangular(n);
    EXPECT_NEAR(exact_pg_value(inst, PgValueMode::kPermutations), brute_ranking(inst), 1e-12)
        << "n=" << n;
  }
}

TEST(ExactPgValue, PermutationsRequireRankInvariance) {
  const auto weighted = make_instance({1.0, 2.0}, 1, {{0, 0, 1.0}, {1, 0, 1.0}});
  EXPECT_THROW(exact_pg_value(weighted, PgValueMode::kPermutations), std::invalid_argument);
  EXPECT_THROW(exact_pg_value(gen_kvv_triangular(9), PgValueMode::kPermutations), GuardError);
}

// Equal weights make grid nodes with equal coordinates ties, which go to the
// smaller id; the midpoint rule converges at rate 1/k.
TEST(ExactPgValue, QuadratureConvergesToPermutations) {
  EXPECT_DOUBLE_EQ(exact_pg_value(gen_kvv_triangular(2), PgValueMode::kQuadrature, 16),
                   1.5 + 1.0 / 32.0);
  for (int n = 1; n <= 4; ++n) {
    const auto inst = gen_kvv_triangular(n);
    const double exact = exact_pg_value(inst, PgValueMode::kPermutations);
    const double coarse = std::abs(exact_pg_value(inst, PgValueMode::kQuadrature, 16) - exact);
    const double fine = std::abs(exact_pg_value(inst, PgValueMode::kQuadrature, 64) - exact);
    EXPECT_LE(coarse, n * n / 16.0) << "n=" << n;
    EXPECT_LE(fine, n * n / 64.0) << "n=" << n;
    EXPECT_LE(fine, coarse) << "n=" << n;
  }
}

TEST(ExactPgValue, SingleResourceIsGreedy) {
  const auto inst = make_instance({2.0}, 3, {{0, 0, 0.3}, {0, 1, 0.6}, {0, 2, 0.5}});
  EXPECT_NEAR(exact_pg_value(inst, PgValueMode::kQuadrature),
              exact_policy_value(inst, greedy_policy(inst)).realized, 1e-12);
}

TEST(ExactPgValue, QuadratureParallelIsBitIdentical) {
  RandomFamily f;
  f.n = 3;
  f.m = 4;
  f.prob_class = ProbClass::kDecomposable;
  const auto inst = gen_random(f, 12);
  const double serial = exact_pg_value(inst, PgValueMode::kQuadrature, 32, 1);
  EXPECT_EQ(serial, exact_pg_value(inst, PgValueMode::kQuadrature, 32, 4));
  EXPECT_EQ(serial, exact_pg_value(inst, PgValueMode::kQuadrature, 32, 3));
}

TEST(ExactPgValue, QuadratureGuard) {
  RandomFamily f;
  f.n = 5;
  f.m = 2;
  EXPECT_THROW(exact_pg_value(gen_random(f, 1), PgValueMode::kQuadrature), GuardError);
}

TEST(RankedPolicy, WalksPreferences) {
  const RankedPolicy policy({{2, 0, 1}});
  const Availability a{1, 1, 0};
  EXPECT_EQ(policy.select(0, a), 0);
  const Availability none{0, 0, 0};
  EXPECT_FALSE(policy.select(0, none).has_value());
}

}  // namespace
}  // namespace stochmatch
