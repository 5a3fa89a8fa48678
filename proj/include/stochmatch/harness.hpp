#pragma once

// Monte Carlo estimation of algorithm values and competitive ratios.
//
// Replication r runs on the stream seeded by derive_seed(master_seed, r), so
// its outcome does not depend on R or on scheduling. Replication values are
// collected into a vector and folded in index order with compensated
// summation; the serial and OpenMP kernels give bit-identical results.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "stochmatch/algorithms.hpp"
#include "stochmatch/generators.hpp"
#include "stochmatch/model.hpp"

namespace stochmatch {

// Realized: sum r_i X_it. Expected: sum r_i p_it Y_it.
enum class Accounting { kRealized, kExpected };

std::string_view to_string(Accounting mode);
std::optional<Accounting> parse_accounting(std::string_view text);

inline constexpr double kDefaultZ = 3.0;

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample sd / sqrt(R)
  double z = kDefaultZ;
  double ci_level = 0.0;   // two-sided normal coverage of mean +- z * std_error
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t replications = 0;
  std::uint64_t master_seed = 0;
  Accounting mode = Accounting::kRealized;
};

// Aggregates replication values in index order.
Estimate summarize(const std::vector<double>& values, std::uint64_t master_seed,
                   Accounting mode, double z = kDefaultZ);

// One replication of an algorithm on an instance, with per-instance data
// (edge coefficients, atom bits) prepared once. Throws std::invalid_argument
// when the algorithm does not apply to the instance variant.
class ReplicationRunner {
 public:
  ReplicationRunner(AlgorithmId algorithm, const AnyInstance& instance);

  RunTrace trace(std::uint64_t seed) const;
  double value(std::uint64_t seed, Accounting mode) const;

 private:
  AlgorithmId algorithm_;
  const AnyInstance* instance_;
  std::shared_ptr<const EdgeCoefficients> coeffs_;
  std::vector<std::vector<double>> atom_scales_;
};

// Replication values 0..R-1. workers <= 1 selects the serial reference.
std::vector<double> replicate(const ReplicationRunner& runner,
                              std::uint64_t replications, std::uint64_t master_seed,
                              Accounting mode, int workers = 1);
std::vector<double> replicate_serial(const ReplicationRunner& runner,
                                     std::uint64_t replications,
                                     std::uint64_t master_seed, Accounting mode);

Estimate estimate_value(AlgorithmId algorithm, const AnyInstance& instance,
                        std::uint64_t replications, std::uint64_t master_seed,
                        Accounting mode = Accounting::kRealized, int workers = 1);

enum class OracleKind { kDp, kMatching, kBMatching, kAdwordsHard, kValue };

std::string_view to_string(OracleKind oracle);
std::optional<OracleKind> parse_oracle(std::string_view text);

struct OracleSpec {
  OracleKind kind = OracleKind::kDp;
  double eps = kHardEps;  // kAdwordsHard
  double value = 0.0;     // kValue: supplied exact value
};

// Exact oracle value; guard failures propagate.
double oracle_value(const AnyInstance& instance, const OracleSpec& oracle);

struct RatioEstimate {
  Estimate alg;
  double opt = 0.0;
  double ratio = 0.0;
  double ratio_std_error = 0.0;     // alg.std_error / opt
  double ratio_conservative = 0.0;  // (mean - z * std_error) / opt
};

RatioEstimate make_ratio(const Estimate& alg, double opt);

RatioEstimate estimate_ratio(AlgorithmId algorithm, const AnyInstance& instance,
                             const OracleSpec& oracle, std::uint64_t replications,
                             std::uint64_t master_seed,
                             Accounting mode = Accounting::kRealized,
                             int workers = 1);

struct HardnessRow {
  int n = 0;
  double p = 0.0;
  std::uint64_t seed = 0;  // shared by both algorithms
  Estimate stoch;          // PG on the stochastic instance, expected accounting
  Estimate adwords;        // PG on the Adwords instance
  double opt_star = 0.0;
  double ratio_stoch = 0.0;
  double ratio_adwords = 0.0;
};

// For each n: both hard instances with p = p_override or 1/n^2; row seed
// derive_seed(master_seed, n). Both algorithms share the seed and hence y.
std::vector<HardnessRow> hardness_sweep(const std::vector<int>& ns, double eps,
                                        std::optional<double> p_override,
                                        std::uint64_t replications,
                                        std::uint64_t master_seed, int workers = 1);

}  // namespace stochmatch
