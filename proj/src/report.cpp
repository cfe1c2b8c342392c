#include "qwn/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace qwn {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::reported: return "reported";
  }
  return "unknown";
}

CheckRecord asserted(std::string name, std::string location, double residual,
                     double tolerance, Json measured, Json expected, std::string notes) {
  CheckRecord r;
  r.name = std::move(name);
  r.location = std::move(location);
  r.residual = residual;
  r.tolerance = tolerance;
  r.measured = std::move(measured);
  r.expected = std::move(expected);
  r.notes = std::move(notes);
  r.status = (residual <= tolerance) ? Status::pass : Status::fail;
  return r;
}

CheckRecord reported(std::string name, std::string location, Json measured, Json expected,
                     std::string notes) {
  CheckRecord r;
  r.name = std::move(name);
  r.location = std::move(location);
  r.measured = std::move(measured);
  r.expected = std::move(expected);
  r.notes = std::move(notes);
  r.status = Status::reported;
  return r;
}

Json complex_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

void VerificationReport::add(CheckRecord record, const std::string& suite) {
  record.suite = suite;
  if (record.location.empty()) throw Error("check record without location: " + record.name);
  checks.push_back(std::move(record));
}

void VerificationReport::add_all(std::vector<CheckRecord> records, const std::string& suite) {
  for (auto& r : records) add(std::move(r), suite);
}

void VerificationReport::sort() {
  std::stable_sort(checks.begin(), checks.end(), [](const CheckRecord& a, const CheckRecord& b) {
    if (a.suite != b.suite) return a.suite < b.suite;
    return a.name < b.name;
  });
}

bool VerificationReport::any_failed() const {
  return std::any_of(checks.begin(), checks.end(),
                     [](const CheckRecord& r) { return r.status == Status::fail; });
}

std::size_t VerificationReport::count(Status s) const {
  return static_cast<std::size_t>(std::count_if(
      checks.begin(), checks.end(), [s](const CheckRecord& r) { return r.status == s; }));
}

Json to_json(const CheckRecord& r) {
  return Json{{"suite", r.suite},         {"name", r.name},           {"paper_location", r.location},
              {"measured", r.measured},   {"expected", r.expected},   {"residual", r.residual},
              {"tolerance", r.tolerance}, {"status", to_string(r.status)}, {"notes", r.notes}};
}

Json to_json(const VerificationReport& report) {
  Json checks = Json::array();
  for (const auto& r : report.checks) checks.push_back(to_json(r));
  return Json{{"config", report.config},
              {"checks", checks},
              {"summary",
               {{"total", report.checks.size()},
                {"pass", report.count(Status::pass)},
                {"fail", report.count(Status::fail)},
                {"reported", report.count(Status::reported)}}}};
}

namespace {

void write_number(double x, std::string& out) {
  if (std::isnan(x)) {
    out += "\"nan\"";
  } else if (std::isinf(x)) {
    out += x > 0 ? "\"inf\"" : "\"-inf\"";
  } else {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out += buf;
  }
}

void write(const Json& v, std::string& out) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      // nlohmann::json objects are std::map backed: keys iterate sorted.
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        write(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        write(v[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      write_number(v.get<double>(), out);
      break;
    default:
      out += v.dump();
  }
}

}  // namespace

std::string canonical_json(const Json& value) {
  std::string out;
  write(value, out);
  return out;
}

void emit_report(const VerificationReport& report, const std::string& path) {
  const std::string text = canonical_json(to_json(report)) + "\n";
  if (path == "-") {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open report file: " + path);
  file << text;
  if (!file) throw Error("failed writing report file: " + path);
}

}  // namespace qwn
