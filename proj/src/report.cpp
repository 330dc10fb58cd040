#include "morreylab/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "morreylab/grid.hpp"

namespace morreylab {

namespace fs = std::filesystem;
using nlohmann::json;

bool SuiteReport::passed() const {
  bool any = false;
  for (const Check& c : checks) {
    if (c.informational) continue;
    any = true;
    if (!c.pass) return false;
  }
  return any;
}

void SuiteReport::check(std::string name, bool pass, std::string detail, bool informational) {
  checks.push_back({std::move(name), pass, std::move(detail), informational});
}

RefinementVerdict refinement_verdict(const std::vector<double>& c, double tolerance) {
  RefinementVerdict v;
  int growthRun = 0;
  for (std::size_t k = 1; k < c.size(); ++k) {
    double rel;
    if (c[k - 1] == 0.0)
      rel = c[k] == 0.0 ? 0.0 : INFINITY;
    else
      rel = std::abs(c[k] - c[k - 1]) / std::abs(c[k - 1]);
    if (!std::isfinite(c[k]) || !std::isfinite(c[k - 1])) rel = INFINITY;
    v.maxRelativeChange = std::max(v.maxRelativeChange, rel);
    if (rel > tolerance) v.stable = false;
    growthRun = c[k] >= 1.5 * c[k - 1] && c[k - 1] > 0.0 ? growthRun + 1 : 0;
    if (growthRun >= 2) v.diverging = true;
  }
  return v;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trend_string(const std::vector<std::pair<int, double>>& trend) {
  std::string s;
  for (const auto& [n, c] : trend) {
    if (!s.empty()) s += ";";
    s += "N=" + std::to_string(n) + ":" + format_number(c);
  }
  return s;
}

namespace {

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

json summary_json(const SuiteReport& r) {
  json trend = json::array();
  for (const auto& [n, c] : r.trend) trend.push_back({{"N", n}, {"fittedConstant", number(c)}});
  json checks = json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}, {"informational", c.informational}});
  return {{"suite", r.suite},
          {"verdict", r.verdict()},
          {"fittedConstant", number(r.fittedConstant)},
          {"tolerance", number(r.tolerance)},
          {"N-trend", trend},
          {"checks", checks},
          {"notes", r.notes},
          {"rows", r.rows.size()},
          {"seconds", std::round(r.seconds * 1000.0) / 1000.0}};
}

void write_suite_report(const SuiteReport& r, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);
  {
    std::ofstream out(base / (r.suite + ".csv"));
    if (!out) throw Error("cannot write report to " + dir);
    out << "suite,case,N,lhs,rhs,ratio,flags\n";
    for (const ReportRow& row : r.rows) {
      std::string flags;
      for (const std::string& f : row.flags) flags += (flags.empty() ? "" : ";") + f;
      out << r.suite << ',' << csv_field(row.caseId) << ',' << row.N << ',' << format_number(row.lhs) << ','
          << format_number(row.rhs) << ',' << format_number(row.ratio) << ',' << csv_field(flags) << '\n';
    }
  }
  {
    std::ofstream out(base / (r.suite + "_summary.json"));
    out << summary_json(r).dump(2) << '\n';
  }
  const fs::path plot = base / (r.suite + "_plot.csv");
  if (!r.plot.empty()) {
    std::ofstream out(plot);
    out << "r,ratio\n";
    for (const auto& [x, y] : r.plot) out << format_number(x) << ',' << format_number(y) << '\n';
  } else if (fs::exists(plot)) {
    fs::remove(plot);
  }
}

json merge_reports(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error("no report directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    const std::string tail = "_summary.json";
    if (name.size() > tail.size() && name.compare(name.size() - tail.size(), tail.size(), tail) == 0)
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  json merged{{"suites", json::array()}};
  bool all = !files.empty();
  for (const fs::path& p : files) {
    std::ifstream in(p);
    json s;
    try {
      in >> s;
    } catch (const json::exception& e) {
      throw Error("cannot parse " + p.string() + ": " + e.what());
    }
    all = all && s.value("verdict", "FAIL") == "PASS";
    merged["suites"].push_back(s);
  }
  merged["verdict"] = all ? "PASS" : "FAIL";
  std::ofstream out(fs::path(dir) / "summary.json");
  out << merged.dump(2) << '\n';
  return merged;
}

}  // namespace morreylab
