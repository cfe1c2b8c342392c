#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qwn/types.hpp"

namespace qwn {

using Json = nlohmann::json;

/// pass/fail for asserted theorems; reported for measured quantities that are
/// deliberately not asserted.
enum class Status { pass, fail, reported };

std::string to_string(Status s);

struct CheckRecord {
  std::string suite;
  std::string name;
  // Where in the theory the checked statement lives (never empty).
  std::string location;
  Json measured;
  Json expected;
  double residual = 0.0;
  double tolerance = 0.0;
  Status status = Status::reported;
  std::string notes;

  bool passed() const { return status != Status::fail; }
};

/// Asserted check: pass iff residual <= tolerance (NaN fails).
CheckRecord asserted(std::string name, std::string location, double residual,
                     double tolerance, Json measured = nullptr, Json expected = nullptr,
                     std::string notes = {});
/// Measured-only record.
CheckRecord reported(std::string name, std::string location, Json measured,
                     Json expected = nullptr, std::string notes = {});

Json complex_json(cplx z);

struct VerificationReport {
  Json config = Json::object();
  std::vector<CheckRecord> checks;
  // Wall-clock time; never part of the canonical serialization.
  double wall_clock_seconds = 0.0;

  void add(CheckRecord record, const std::string& suite);
  void add_all(std::vector<CheckRecord> records, const std::string& suite);
  /// Orders checks by (suite, name), stable within equal keys.
  void sort();
  bool any_failed() const;
  std::size_t count(Status s) const;
};

Json to_json(const CheckRecord& record);
Json to_json(const VerificationReport& report);

/// Deterministic serialization: sorted keys, floats as %.17g, non-finite
/// numbers as the strings "nan", "inf", "-inf".
std::string canonical_json(const Json& value);

/// Writes canonical_json(to_json(report)) plus a newline; path "-" is stdout.
void emit_report(const VerificationReport& report, const std::string& path);

}  // namespace qwn
