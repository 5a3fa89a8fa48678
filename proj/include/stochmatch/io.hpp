#pragma once

// Instance files (JSON, format_version 1) and CSV result rows.
//
// {
//   "format_version": 1,
//   "kind": "stochastic" | "correlated" | "bmatching" | "adwords",
//   "resources": [{"id": "r0", "weight": 1.0, "budget": 2}],
//   "arrivals": ["t0", "t1"],
//   "edges": [{"resource": "r0", "arrival": "t0", "p": 0.5, "bid": 1.0}],
//   "correlated": {"resource_probs": [0.5], "support": [{"bits": "01", "prob": 1}]},
//   "hidden_budgets": true
// }
//
// Ids are strings or integers and are mapped to dense indices in listing
// order. "p" (default 1) belongs to stochastic edges, "bid" to Adwords edges
// (optional for b-matching, where it must equal the weight), "budget" and
// "hidden_budgets" to budgeted kinds, "correlated" to the correlated kind.
// Any other field is rejected by name.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stochmatch/harness.hpp"
#include "stochmatch/model.hpp"

namespace stochmatch {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;

std::string_view kind_name(const AnyInstance& instance);

// Parses and validates; throws FormatError.
AnyInstance parse_instance(std::string_view text);
AnyInstance load_instance(const std::string& path);

std::string dump_instance(const AnyInstance& instance);
void save_instance(const std::string& path, const AnyInstance& instance);

// Decimal with 12 significant digits.
std::string format_number(double value);

struct ResultRow {
  std::string experiment;
  std::string instance_id;
  std::string algorithm;
  int n = 0;
  int m = 0;
  std::uint64_t replications = 0;
  std::uint64_t seed = 0;
  std::string mode;
  double mean = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::optional<double> opt;
  std::optional<double> ratio;
  std::optional<double> ratio_conservative;
};

std::string csv_header();
std::string csv_line(const ResultRow& row);
// Header followed by one line per row, each newline-terminated.
std::string csv_table(const std::vector<ResultRow>& rows);

// Columns of the hardness sweep.
std::string hardness_header();
std::string hardness_line(const HardnessRow& row);

}  // namespace stochmatch
