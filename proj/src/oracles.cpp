#include "stochmatch/oracles.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stochmatch/assignment.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/summation.hpp"

namespace stochmatch {

namespace {

class Expectimax {
 public:
  explicit Expectimax(const StochasticInstance& inst) : inst_(inst) {}

  double value(std::uint64_t available, std::uint64_t remaining) {
    if (available == 0 || remaining == 0) return 0.0;
    const std::uint64_t key = (available << inst_.num_arrivals()) | remaining;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    double best = 0.0;
    for (std::uint64_t rest = remaining; rest != 0; rest &= rest - 1) {
      const int t = std::countr_zero(rest);
      const std::uint64_t without_t = remaining & ~(std::uint64_t{1} << t);
      const double skip = value(available, without_t);
      best = std::max(best, skip);
      for (const Edge& e : inst_.arrivals[t]) {
        const std::uint64_t bit = std::uint64_t{1} << e.resource;
        if (!(available & bit)) continue;
        const double hit =
            e.prob > 0.0
                ? e.prob * (inst_.weights[e.resource] + value(available & ~bit, without_t))
                : 0.0;
        best = std::max(best, hit + (1.0 - e.prob) * skip);
      }
    }
    memo_.emplace(key, best);
    return best;
  }

 private:
  const StochasticInstance& inst_;
  std::unordered_map<std::uint64_t, double> memo_;
};

// Recursive outcome-tree walk shared by the independent and correlated
// evaluators. `success_prob(i, t, p)` gives the chance an attempt succeeds.
template <typename SuccessProb>
class PolicyTree {
 public:
  PolicyTree(const StochasticInstance& inst, const OnlinePolicy& policy,
             SuccessProb success_prob, std::span<const double> credit_scale,
             std::uint64_t& leaves)
      : inst_(inst),
        policy_(policy),
        success_prob_(success_prob),
        credit_scale_(credit_scale),
        leaves_(leaves),
        available_(inst.num_resources(), 1) {}

  PolicyValue walk(ArrivalId t) {
    if (t == inst_.num_arrivals()) {
      if (++leaves_ > kMaxPolicyBranches) {
        throw GuardError("exact policy evaluation exceeds " +
                         std::to_string(kMaxPolicyBranches) + " outcome branches");
      }
      return {};
    }
    const auto choice = policy_.select(t, available_);
    if (policy_.select(t, available_) != choice) {
      throw std::invalid_argument("policy is not deterministic");
    }
    if (!choice) return walk(t + 1);

    const ResourceId i = *choice;
    const auto prob = inst_.prob(i, t);
    if (!prob) {
      throw std::logic_error("policy selected a non-neighbor for arrival " +
                             std::to_string(t));
    }
    const double weight = inst_.weights[i];
    double credit = weight * *prob;
    if (!credit_scale_.empty()) credit *= credit_scale_[t];
    const double q = success_prob_(i, t, *prob);

    PolicyValue out{0.0, credit};
    if (q > 0.0) {
      available_[i] = 0;
      const PolicyValue hit = walk(t + 1);
      available_[i] = 1;
      out.realized += q * (weight + hit.realized);
      out.expected += q * hit.expected;
    }
    if (q < 1.0) {
      const PolicyValue miss = walk(t + 1);
      out.realized += (1.0 - q) * miss.realized;
      out.expected += (1.0 - q) * miss.expected;
    }
    return out;
  }

 private:
  const StochasticInstance& inst_;
  const OnlinePolicy& policy_;
  SuccessProb success_prob_;
  std::span<const double> credit_scale_;
  std::uint64_t& leaves_;
  Availability available_;
};

void check_dp_guard(const StochasticInstance& inst) {
  const int n = inst.num_resources();
  const int m = inst.num_arrivals();
  if (n > kMaxDpSide || m > kMaxDpSide || n + m > kMaxDpTotal) {
    throw GuardError("dp oracle limited to n, m <= " + std::to_string(kMaxDpSide) +
                     " and n + m <= " + std::to_string(kMaxDpTotal) + " (got n=" +
                     std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
}

void check_assignment_guard(std::size_t rows, std::size_t cols) {
  if (std::max(rows, cols) > static_cast<std::size_t>(kMaxAssignmentSize)) {
    throw GuardError("assignment oracle limited to side " +
                     std::to_string(kMaxAssignmentSize));
  }
}

// Per-arrival preference lists induced by the perturbed scores at y, ordered
// by score (descending) then resource id; zero scores are dropped.
void preference_key(const EdgeCoefficients& coeffs, std::span<const double> mult,
                    std::vector<std::uint8_t>& key) {
  key.clear();
  std::array<std::pair<double, ResourceId>, kMaxQuadratureResources> buf{};
  for (const auto& row : coeffs.by_arrival) {
    std::size_t len = 0;
    for (const auto& entry : row) {
      const double s = entry.coeff * mult[entry.resource];
      if (s > 0.0) buf[len++] = {s, entry.resource};
    }
    std::sort(buf.begin(), buf.begin() + len, [](const auto& a, const auto& b) {
      return a.first > b.first || (a.first == b.first && a.second < b.second);
    });
    key.push_back(static_cast<std::uint8_t>(len));
    for (std::size_t k = 0; k < len; ++k) {
      key.push_back(static_cast<std::uint8_t>(buf[k].second));
    }
  }
}

std::vector<std::vector<ResourceId>> decode_preferences(
    const std::vector<std::uint8_t>& key, int num_arrivals) {
  std::vector<std::vector<ResourceId>> prefs(num_arrivals);
  std::size_t pos = 0;
  for (int t = 0; t < num_arrivals; ++t) {
    const std::size_t len = key[pos++];
    for (std::size_t k = 0; k < len; ++k) prefs[t].push_back(key[pos++]);
  }
  return prefs;
}

using KeyCounts = std::map<std::vector<std::uint8_t>, std::uint64_t>;

// Counts grid points [begin, end) by induced preference key.
void scan_grid(const EdgeCoefficients& coeffs, int n, int k,
               const std::vector<double>& node_mult, std::uint64_t begin,
               std::uint64_t end, KeyCounts& counts) {
  std::vector<double> mult(n);
  std::vector<std::uint8_t> key, last;
  std::uint64_t pending = 0;
  for (std::uint64_t point = begin; point < end; ++point) {
    std::uint64_t rest = point;
    for (int i = 0; i < n; ++i) {
      mult[i] = node_mult[rest % k];
      rest /= k;
    }
    preference_key(coeffs, mult, key);
    if (pending > 0 && key == last) {
      ++pending;
      continue;
    }
    if (pending > 0) counts[last] += pending;
    last.swap(key);
    pending = 1;
  }
  if (pending > 0) counts[last] += pending;
}

double quadrature_value(const StochasticInstance& inst, int k, int workers) {
  const int n = inst.num_resources();
  if (n > kMaxQuadratureResources) {
    throw GuardError("quadrature mode limited to n <= " +
                     std::to_string(kMaxQuadratureResources));
  }
  if (k < 1) throw std::invalid_argument("quadrature needs at least one grid point");
  if (n == 0) return 0.0;
  for (const auto& adj : inst.arrivals) {
    if (adj.size() > 255) throw GuardError("quadrature: arrival degree too large");
  }

  std::vector<double> node_mult(k);
  for (int j = 0; j < k; ++j) node_mult[j] = perturbation((j + 0.5) / k);
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(k);

  const auto coeffs = EdgeCoefficients::expected_reward(inst);
  KeyCounts counts;
  if (workers <= 1) {
    scan_grid(*coeffs, n, k, node_mult, 0, total, counts);
  } else {
#ifdef _OPENMP
#pragma omp parallel num_threads(workers)
    {
      const std::uint64_t threads = omp_get_num_threads();
      const std::uint64_t tid = omp_get_thread_num();
      const std::uint64_t chunk = (total + threads - 1) / threads;
      const std::uint64_t begin = std::min(total, tid * chunk);
      const std::uint64_t end = std::min(total, begin + chunk);
      KeyCounts local;
      scan_grid(*coeffs, n, k, node_mult, begin, end, local);
#pragma omp critical(stochmatch_quadrature_merge)
      for (const auto& [key, c] : local) counts[key] += c;
    }
#else
    scan_grid(*coeffs, n, k, node_mult, 0, total, counts);
#endif
  }

  CompensatedSum sum;
  for (const auto& [key, c] : counts) {
    const RankedPolicy policy(decode_preferences(key, inst.num_arrivals()));
    sum.add(static_cast<double>(c) * exact_policy_value(inst, policy).realized);
  }
  return sum.value() / static_cast<double>(total);
}

double permutation_value(const StochasticInstance& inst) {
  const int n = inst.num_resources();
  if (n > kMaxPermutationResources) {
    throw GuardError("permutation mode limited to n <= " +
                     std::to_string(kMaxPermutationResources));
  }
  for (int i = 1; i < n; ++i) {
    if (std::abs(inst.weights[i] - inst.weights[0]) > kExactTolerance) {
      throw std::invalid_argument(
          "permutation mode needs equal weights: decisions depend on y beyond rank order");
    }
  }
  if (!arrival_uniform_probs(inst)) {
    throw std::invalid_argument(
        "permutation mode needs per-arrival equal probabilities: decisions depend on "
        "y beyond rank order");
  }
  if (n == 0) return 0.0;

  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::vector<double> y(n);
  CompensatedSum sum;
  std::uint64_t count = 0;
  do {
    for (int i = 0; i < n; ++i) y[i] = (rank[i] + 0.5) / n;
    sum.add(exact_policy_value(inst, perturbed_greedy_policy(inst, y)).realized);
    ++count;
  } while (std::next_permutation(rank.begin(), rank.end()));
  return sum.value() / static_cast<double>(count);
}

}  // namespace

std::optional<ResourceId> RankedPolicy::select(
    ArrivalId arrival, std::span<const std::uint8_t> available) const {
  for (ResourceId i : preferences_[arrival]) {
    if (available[i]) return i;
  }
  return std::nullopt;
}

double opt_nonanticipative(const StochasticInstance& instance) {
  check_dp_guard(instance);
  const std::uint64_t all_resources = (std::uint64_t{1} << instance.num_resources()) - 1;
  const std::uint64_t all_arrivals = (std::uint64_t{1} << instance.num_arrivals()) - 1;
  return Expectimax(instance).value(all_resources, all_arrivals);
}

double opt_deterministic_matching(const StochasticInstance& instance) {
  for (const auto& adj : instance.arrivals) {
    for (const Edge& e : adj) {
      if (std::abs(e.prob - 1.0) > kExactTolerance) {
        throw std::invalid_argument("matching oracle requires a deterministic instance");
      }
    }
  }
  check_assignment_guard(instance.arrivals.size(), instance.weights.size());
  std::vector<std::vector<double>> w(
      instance.num_arrivals(), std::vector<double>(instance.num_resources(), 0.0));
  for (ArrivalId t = 0; t < instance.num_arrivals(); ++t) {
    for (const Edge& e : instance.arrivals[t]) w[t][e.resource] = instance.weights[e.resource];
  }
  return max_weight_assignment(w);
}

double opt_bmatching(const BudgetedInstance& instance) {
  if (instance.kind != BudgetKind::kBMatching) {
    throw std::invalid_argument("bmatching oracle requires a b-matching instance");
  }
  const int m = instance.num_arrivals();
  // One column per usable unit of budget; no resource can use more than m.
  std::vector<int> first_slot(instance.num_resources() + 1, 0);
  for (int i = 0; i < instance.num_resources(); ++i) {
    const int copies = static_cast<int>(std::min<double>(instance.budgets[i], m));
    first_slot[i + 1] = first_slot[i] + std::max(copies, 0);
  }
  const int slots = first_slot.back();
  check_assignment_guard(m, slots);
  std::vector<std::vector<double>> w(m, std::vector<double>(slots, 0.0));
  for (ArrivalId t = 0; t < m; ++t) {
    for (const Bid& b : instance.arrivals[t]) {
      for (int s = first_slot[b.resource]; s < first_slot[b.resource + 1]; ++s) {
        w[t][s] = instance.weights[b.resource];
      }
    }
  }
  return max_weight_assignment(w);
}

double opt_adwords_hard(int n, double eps) {
  if (n < 1) throw std::invalid_argument("adwords-hard oracle: n must be >= 1");
  CompensatedSum total;
  for (int t = 1; t <= n; ++t) total.add(hard_weight(t, n, eps));
  return static_cast<double>(n) + total.value();
}

PolicyValue exact_policy_value(const StochasticInstance& instance,
                               const OnlinePolicy& policy) {
  std::uint64_t leaves = 0;
  auto independent = [](ResourceId, ArrivalId, double p) { return p; };
  PolicyTree tree(instance, policy, independent, {}, leaves);
  return tree.walk(0);
}

PolicyValue exact_policy_value(const CorrelatedInstance& instance,
                               const OnlinePolicy& policy) {
  std::uint64_t leaves = 0;
  CompensatedSum realized, expected;
  for (const ArrivalAtom& atom : instance.support) {
    if (atom.prob <= 0.0) continue;
    auto correlated = [&](ResourceId i, ArrivalId t, double) {
      return atom.bits[t] ? instance.resource_probs[i] : 0.0;
    };
    const std::vector<double> scale(atom.bits.begin(), atom.bits.end());
    PolicyTree tree(instance.graph, policy, correlated, scale, leaves);
    const PolicyValue v = tree.walk(0);
    realized.add(atom.prob * v.realized);
    expected.add(atom.prob * v.expected);
  }
  return {realized.value(), expected.value()};
}

double exact_pg_value(const StochasticInstance& instance, PgValueMode mode,
                      int grid_points, int workers) {
  return mode == PgValueMode::kPermutations
             ? permutation_value(instance)
             : quadrature_value(instance, grid_points, workers);
}

}  // namespace stochmatch
