#include <gtest/gtest.h>

#include <cmath>

#include "stochmatch/generators.hpp"
#include "stochmatch/random.hpp"

namespace stochmatch {
namespace {

TEST(Kvv, TriangleShape) {
  const auto inst = gen_kvv_triangular(8);
  EXPECT_EQ(inst.num_resources(), 8);
  EXPECT_EQ(inst.num_arrivals(), 8);
  EXPECT_EQ(inst.num_edges(), 36u);
  EXPECT_EQ(inst.arrivals[0].size(), 8u);
  EXPECT_EQ(inst.arrivals[7].size(), 1u);
  EXPECT_EQ(inst.arrivals[7][0].resource, 7);
  EXPECT_EQ(classify(inst).cls, ProbClass::kDeterministic);
  EXPECT_THROW(gen_kvv_triangular(0), std::invalid_argument);
}

TEST(HardWeight, KnownValues) {
  EXPECT_NEAR(hard_weight(1, 1, kHardEps), 0.6786414698692655, 1e-12);
  // Decreasing in t and positive up to t = n.
  for (int n : {3, 10, 50}) {
    for (int t = 1; t < n; ++t) EXPECT_GT(hard_weight(t, n, kHardEps), hard_weight(t + 1, n, kHardEps));
    EXPECT_GT(hard_weight(n, n, kHardEps), 0.0);
    EXPECT_LT(hard_weight(1, n, kHardEps), (1.0 - std::exp(-1.0)) / (1.0 - std::exp(kHardEps - 1.0)));
  }
}

TEST(HardStochastic, Structure) {
  const int n = 5;
  const auto inst = gen_hard_stochastic({n, kHardEps, std::nullopt});
  EXPECT_EQ(inst.num_resources(), n + 1);
  EXPECT_EQ(inst.num_arrivals(), 2 * n);
  EXPECT_DOUBLE_EQ(inst.weights[n], 25.0);
  for (int t = 0; t < 2 * n; ++t) {
    EXPECT_EQ(inst.arrivals[t].size(), t < n ? n + 1u : std::size_t(n));
  }
  EXPECT_NEAR(*inst.prob(n, 0), hard_weight(1, n, kHardEps) / 25.0, 1e-15);
  // Expected reward of the big edge equals the Adwords bid.
  for (int t = 0; t < n; ++t) {
    EXPECT_NEAR(inst.weights[n] * *inst.prob(n, t), hard_weight(t + 1, n, kHardEps), 1e-12);
  }
  EXPECT_TRUE(validate(inst).empty());
}

TEST(HardStochastic, Rejections) {
  EXPECT_THROW(gen_hard_stochastic({3, 0.0, std::nullopt}), std::invalid_argument);
  EXPECT_THROW(gen_hard_stochastic({3, 1.0, std::nullopt}), std::invalid_argument);
  // p * w(1) >= 1.
  EXPECT_THROW(gen_hard_stochastic({1, kHardEps, 2.0}), std::invalid_argument);
}

TEST(HardAdwords, Structure) {
  const int n = 4;
  const auto inst = gen_hard_adwords(n);
  EXPECT_EQ(inst.kind, BudgetKind::kAdwords);
  EXPECT_TRUE(inst.budgets_hidden);
  EXPECT_NEAR(inst.budgets[n], 2.6092367238657785, 1e-12);
  for (int i = 0; i < n; ++i) EXPECT_EQ(inst.budgets[i], 1.0);
  EXPECT_EQ(inst.arrivals[n].size(), std::size_t(n));
  EXPECT_NEAR(inst.arrivals[0].back().amount, hard_weight(1, n, kHardEps), 1e-15);
  EXPECT_TRUE(validate(inst).empty());
}

TEST(Separator, Value) {
  const auto inst = gen_omniscient_separator(10);
  EXPECT_EQ(inst.num_arrivals(), 1);
  EXPECT_EQ(inst.arrivals[0].size(), 10u);
  EXPECT_DOUBLE_EQ(*inst.prob(3, 0), 0.1);
  EXPECT_NEAR(omniscient_separator_value(10), 0.6513215599, 1e-10);
  EXPECT_DOUBLE_EQ(omniscient_separator_value(1), 1.0);
}

TEST(RandomFamily, SameSeedSameInstance) {
  RandomFamily f;
  f.n = 4;
  f.m = 6;
  f.density = 0.6;
  EXPECT_EQ(gen_random(f, 42), gen_random(f, 42));
  EXPECT_NE(gen_random(f, 42), gen_random(f, 43));
}

TEST(RandomFamily, ClassIsRespected) {
  Rng rng(3);
  for (ProbClass c : {ProbClass::kDeterministic, ProbClass::kIdentical,
                      ProbClass::kArrivalUniform, ProbClass::kResourceUniform,
                      ProbClass::kDecomposable, ProbClass::kGeneral}) {
    for (int k = 0; k < 50; ++k) {
      RandomFamily f;
      f.n = 1 + static_cast<int>(rng.uniform() * 4);
      f.m = 1 + static_cast<int>(rng.uniform() * 5);
      f.density = 0.3 + 0.7 * rng.uniform();
      f.prob_class = c;
      const auto inst = gen_random(f, rng.next());
      EXPECT_TRUE(validate(inst).empty());
      EXPECT_TRUE(belongs_to(inst, c)) << to_string(c);
      for (double w : inst.weights) {
        EXPECT_GE(w, f.weight_lo);
        EXPECT_LE(w, f.weight_hi);
      }
    }
  }
}

TEST(RandomFamily, FullDensityHasAllEdges) {
  RandomFamily f;
  f.n = 5;
  f.m = 7;
  EXPECT_EQ(gen_random(f, 1).num_edges(), 35u);
}

TEST(RandomFamily, BadParameters) {
  RandomFamily f;
  f.density = 0.0;
  EXPECT_THROW(gen_random(f, 1), std::invalid_argument);
  f.density = 1.0;
  f.n = 0;
  EXPECT_THROW(gen_random(f, 1), std::invalid_argument);
}

TEST(RandomCorrelated, ValidAndSeeded) {
  RandomFamily f;
  f.n = 3;
  f.m = 4;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto inst = gen_random_correlated(f, 3, s);
    EXPECT_TRUE(validate(inst).empty());
    EXPECT_LE(inst.support.size(), 3u);
    EXPECT_EQ(inst, gen_random_correlated(f, 3, s));
  }
  EXPECT_THROW(gen_random_correlated(f, 0, 1), std::invalid_argument);
}

}  // namespace
}  // namespace stochmatch
