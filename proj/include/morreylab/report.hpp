#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace morreylab {

/// One computed instance of an inequality.
struct ReportRow {
  std::string caseId;
  int N = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<std::string> flags;  // grid-sensitive, truncation-sensitive, vacuous, out-of-class, ...
};

/// A named pass/fail criterion inside a suite.
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
  bool informational = false;  // reported, not part of the verdict
};

struct SuiteReport {
  std::string suite;
  double fittedConstant = 0.0;
  double tolerance = 0.0;
  std::vector<std::pair<int, double>> trend;  // (N, fitted constant)
  std::vector<Check> checks;
  std::vector<ReportRow> rows;
  std::vector<std::pair<double, double>> plot;  // (r, ratio)
  std::vector<std::string> notes;
  double seconds = 0.0;

  /// PASS iff every non-informational check passes (and there is one).
  bool passed() const;
  std::string verdict() const { return passed() ? "PASS" : "FAIL"; }
  void check(std::string name, bool pass, std::string detail = {}, bool informational = false);
};

struct RefinementVerdict {
  bool stable = true;
  bool diverging = false;  // >= 50% growth on two consecutive refinements
  double maxRelativeChange = 0.0;
};

/// |C(2N) - C(N)| / C(N) <= tolerance for every consecutive pair of the
/// trend; two zero constants count as unchanged.
RefinementVerdict refinement_verdict(const std::vector<double>& constants, double tolerance);

/// "N=128:1.23;N=256:1.25" style rendering.
std::string trend_string(const std::vector<std::pair<int, double>>& trend);

/// Shortest round-trip decimal of v (deterministic across runs).
std::string format_number(double v);

nlohmann::json summary_json(const SuiteReport& r);

/// Writes <dir>/<suite>.csv (suite,case,N,lhs,rhs,ratio,flags),
/// <dir>/<suite>_summary.json and, when there is plot data, <dir>/<suite>_plot.csv.
void write_suite_report(const SuiteReport& r, const std::string& dir);

/// Merges every <suite>_summary.json of the directory into <dir>/summary.json;
/// returns the merged document (suites sorted by name).
nlohmann::json merge_reports(const std::string& dir);

}  // namespace morreylab
