#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qwn/report.hpp"
#include "qwn/rewrite.hpp"

namespace qwn {

/// Invalid command-line or configuration input (exit code 2).
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string suite;
  double gamma0 = 1.0;
  double gamma = 1.0;
  double q = 0.5;
  double s = 2.0;
  double l = 0.5;
  std::string algebra = "functions";
  int dim = 2;
  // Fixed point weights for the function algebra; random in [0.2, 1.5] when unset.
  std::optional<std::vector<double>> weights;
  // Unset means the suite default (4 for qdeform, 3 otherwise).
  std::optional<int> truncation;
  int trials = 10;
  int order = 6;
  std::uint64_t seed = 0;
  // Overrides every per-check tolerance when set.
  std::optional<double> tol;
  std::string output = "-";
  // Relation-table kappa for the rewrite subcommand.
  double kappa = 2.0;
  // Extra named rewrite symbols: {"name": [v_0, ..., v_{d-1}]}, entries real or [re, im].
  Json symbols = Json::object();

  /// Throws UsageError on invalid values.
  void validate() const;
  int truncation_for(const std::string& suite) const;
  Json to_json() const;
  /// Fills fields present in a JSON object; unknown keys are a usage error.
  /// "algebra" is either a kind name or an object
  /// {"kind": "functions", "weights": [...]} / {"kind": "functions", "points": [{"weight": w}, ...]}
  /// / {"kind": "matrices", "dim": m, "state": "trace"}.
  void merge(const Json& j);
};

const std::vector<std::string>& suite_names();

/// Runs the selected suite (or every suite for "all") deterministically
/// under the seed. Checks are sorted by suite, then name.
VerificationReport run_suite(const RunConfig& config);

/// Normal-orders one word given as a JSON list of {"kind", "symbol"} over the
/// configured function algebra. Built-in symbols: "1" and the point
/// indicators "e0", ..., "e{d-1}".
SymbolTable rewrite_symbols(const RunConfig& config);
VerificationReport run_rewrite(const RunConfig& config, const Json& word);

/// Enumerated partition counts against Bell, ordered-partition, Catalan and
/// 2^{k-1} counts.
VerificationReport run_combinatorics_selftest();

/// Per-check maximum over repeated trials: records with the same name are
/// merged, keeping the worst residual; a failure anywhere is kept.
std::vector<CheckRecord> worst_of(const std::vector<std::vector<CheckRecord>>& trials);

}  // namespace qwn
