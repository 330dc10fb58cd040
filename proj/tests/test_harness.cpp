#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "morreylab/corpus.hpp"
#include "morreylab/harness.hpp"
#include "morreylab/operators.hpp"
#include "morreylab/solver.hpp"

using namespace morreylab;
namespace fs = std::filesystem;

namespace {

// Small grids and sweeps so that every suite runs in seconds.
ExperimentConfig tiny() {
  ExperimentConfig c = ExperimentConfig::defaults();
  c.corpusSize = 12;
  c.centers1d = 5;
  c.centers2d = 4;
  c.radii = 6;
  c.operatorRadii = 12;
  c.jobs = 2;
  c.weights = {c.weights[0], c.weights[1], c.weights[4]};
  c.phis = {c.phis[1], c.phis[3], c.phis[5]};
  for (auto& [name, s] : c.suites)
    for (CaseSpec& cs : s.cases) {
      const bool disk = cs.domain.kind() == Domain::Kind::Disk;
      const int base = disk ? 16 : 32;
      for (std::size_t k = 0; k < cs.grids.size(); ++k) cs.grids[k] = base << k;
      if (cs.grids.size() > 2) cs.grids.resize(2);
    }
  c.suites["kernels"].params["pairs_small"] = 100;
  c.suites["kernels"].params["pairs_large"] = 200;
  c.suites["kernels"].cases.resize(3);
  c.suites["identity"].cases.front().grids = {128};
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("parallel_for visits every index once and rethrows") {
  for (int jobs : {0, 1, 3}) {
    std::vector<std::atomic<int>> hits(100);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) CHECK(h == 1);
  }
  CHECK_THROWS_AS(parallel_for(10, 2, [](std::size_t i) {
                    if (i == 7) throw Error("boom");
                  }),
                  Error);
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("unknown suite lists the valid ones") {
  CHECK_FALSE(is_suite("nope"));
  CHECK(is_suite("apriori"));
  try {
    run_suite("nope", ExperimentConfig::defaults());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    for (const std::string& s : suite_names()) CHECK(msg.find(s) != std::string::npos);
  }
}

TEST_CASE("off-diagonal double integral against a direct double sum") {
  const Domain d = Domain::disk({0, 0}, 1);
  auto g = std::make_shared<const Grid>(d, 16);
  const GreenFunction G(d, 1);
  const auto corpus = default_corpus(d, 9, 14);
  const SampledField f = corpus[6].sample(g), h = corpus[13].sample(g);
  const auto radii = operator_radii(*g, 12);
  for (const MultiIndex& a : multi_indices(2, 2)) {
    // oracle: nested loops, pointwise maximal function
    double lhs = 0.0, rf = 0.0, rg = 0.0;
    const double A = g->cell_measure();
    for (std::size_t i = 0; i < g->size(); ++i) {
      const Point& x = g->node(i);
      for (std::size_t j = 0; j < g->size(); ++j) {
        const Point& y = g->node(j);
        if (distance(x, y) > d.boundary_distance(x)) lhs += std::abs(G.derivative(x, y, a) * f[j] * h[i]) * A * A;
      }
      rf += maximal(f, x, radii) * std::abs(h[i]) * A;
      rg += maximal(h, x, radii) * std::abs(f[i]) * A;
    }
    const OffdiagonalSides s = offdiagonal_sides(G, a, f, h, radii);
    CHECK(s.lhs == doctest::Approx(lhs).epsilon(1e-10));
    CHECK(s.rhsF == doctest::Approx(rf).epsilon(1e-10));
    CHECK(s.rhsG == doctest::Approx(rg).epsilon(1e-10));
    CHECK(lhs > 0.0);
  }
}

TEST_CASE("off-diagonal double integral: trivial cases") {
  const Domain d = Domain::interval(0, 1);
  auto g = std::make_shared<const Grid>(d, 64);
  const GreenFunction G(d, 1);
  const SampledField one = SampledField::sample(g, [](const Point&) { return 1.0; });
  const auto radii = operator_radii(*g, 12);
  // in 1D the top-order derivative of G vanishes off the diagonal
  const OffdiagonalSides s = offdiagonal_sides(G, {2, 0}, one, one, radii);
  CHECK(s.lhs == 0.0);
  CHECK(s.rhsF == doctest::Approx(1.0));  // M1 = 1 on Ω
  const OffdiagonalSides z = offdiagonal_sides(G, {2, 0}, SampledField(g), one, radii);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhsG == 0.0);
}

TEST_CASE("integral inequality example: f = g = 1 on the unit interval") {
  const Domain d = Domain::interval(0, 1);
  auto g = std::make_shared<const Grid>(d, 128);
  const SampledField one = SampledField::sample(g, [](const Point&) { return 1.0; });
  const Jet u = solve_dirichlet(d, 1, one);
  double lhs = 0.0;
  for (std::size_t k = 0; k < g->size(); ++k) lhs += std::abs(u.at({2, 0})[k]) * g->cell_measure();
  CHECK(lhs == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("pointwise example: |u| <= Mf / 8 for f = 1, m = 1") {
  const Domain d = Domain::interval(0, 1);
  auto g = std::make_shared<const Grid>(d, 128);
  const SampledField one = SampledField::sample(g, [](const Point&) { return 1.0; });
  const Jet u = solve_dirichlet(d, 1, one);
  const SampledField M = maximal_field(one, operator_radii(*g));
  double best = 0.0;
  for (std::size_t k = 0; k < g->size(); ++k) best = std::max(best, std::abs(u.at({0, 0})[k]) / M[k]);
  CHECK(best <= 0.125 + 1e-12);
  CHECK(best > 0.124);
}

TEST_CASE("every suite runs on small grids and reports") {
  const ExperimentConfig c = tiny();
  for (const std::string& name : suite_names()) {
    CAPTURE(name);
    const SuiteReport r = run_suite(name, c);
    CHECK(r.suite == name);
    CHECK_FALSE(r.checks.empty());
    CHECK_FALSE(r.rows.empty());
    for (const ReportRow& row : r.rows) {
      bool flagged = !row.flags.empty();
      if (!flagged) CHECK(std::isfinite(row.ratio));
    }
  }
}

TEST_CASE("quick suites pass on small grids") {
  const ExperimentConfig c = tiny();
  for (const std::string name : {"collapse", "hardy", "condition", "identity"}) {
    CAPTURE(name);
    const SuiteReport r = run_suite(name, c);
    for (const Check& k : r.checks) {
      CAPTURE(k.name);
      CAPTURE(k.detail);
      if (!k.informational) CHECK(k.pass);
    }
  }
}

TEST_CASE("a priori suite: scaling invariance and corpus monotonicity") {
  ExperimentConfig c = tiny();
  c.suites["apriori"].cases.resize(1);
  const SuiteReport r = run_suite("apriori", c);
  bool sawScaling = false;
  for (const Check& k : r.checks)
    if (k.name.find("invariant under") != std::string::npos) {
      sawScaling = true;
      CHECK(k.pass);
    }
  CHECK(sawScaling);
  // adding cases never lowers a fitted sup-constant
  ExperimentConfig more = c;
  more.corpusSize = 16;
  const SuiteReport r2 = run_suite("apriori", more);
  CHECK(r2.trend.front().second >= r.trend.front().second);
}

TEST_CASE("reports are deterministic") {
  const ExperimentConfig c = tiny();
  const fs::path a = fs::temp_directory_path() / "morreylab_det_a", b = fs::temp_directory_path() / "morreylab_det_b";
  fs::remove_all(a);
  fs::remove_all(b);
  for (const char* name : {"boundedness", "lemma24"}) {
    write_suite_report(run_suite(name, c), a.string());
    ExperimentConfig serial = c;
    serial.jobs = 1;
    write_suite_report(run_suite(name, serial), b.string());
    CHECK(slurp(a / (std::string(name) + ".csv")) == slurp(b / (std::string(name) + ".csv")));
  }
  fs::remove_all(a);
  fs::remove_all(b);
}
