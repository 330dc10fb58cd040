#include "doctest.h"

#include <cmath>
#include <random>

#include "morreylab/operators.hpp"
#include "morreylab/solver.hpp"

using namespace morreylab;

namespace {
std::shared_ptr<const Grid> make(const Domain& d, int n) { return std::make_shared<const Grid>(d, n); }
SampledField ones(const std::shared_ptr<const Grid>& g) {
  return SampledField::sample(g, [](const Point&) { return 1.0; });
}
double max_rel_error(const SampledField& u, double (*exact)(const Point&)) {
  double e = 0, m = 0;
  for (std::size_t c = 0; c < u.size(); ++c) {
    e = std::max(e, std::abs(u[c] - exact(u.grid().node(c))));
    m = std::max(m, std::abs(exact(u.grid().node(c))));
  }
  return e / m;
}
double u_i1(const Point& p) { return p[0] * (1 - p[0]) / 2; }
double u_i2(const Point& p) { return p[0] * p[0] * (1 - p[0]) * (1 - p[0]) / 24; }
double u_d1(const Point& p) { return (1 - p[0] * p[0] - p[1] * p[1]) / 4; }
double u_d2(const Point& p) {
  const double s = 1 - p[0] * p[0] - p[1] * p[1];
  return s * s / 64;
}
}  // namespace

TEST_CASE("exact solutions on the interval") {
  const Domain I = Domain::interval(0, 1);
  auto g = make(I, 64);
  const Jet j1 = solve_dirichlet(I, 1, ones(g));
  CHECK(max_rel_error(j1.at({0, 0}), u_i1) < 1e-12);
  for (std::size_t c = 0; c < g->size(); ++c) {
    CHECK(j1.at({1, 0})[c] == doctest::Approx(0.5 - g->node(c)[0]).epsilon(1e-10));
    CHECK(j1.at({2, 0})[c] == doctest::Approx(-1.0).epsilon(1e-9));
  }
  const Jet j2 = solve_dirichlet(I, 2, ones(g));
  CHECK(max_rel_error(j2.at({0, 0}), u_i2) < 1e-12);
  CHECK(j2.size() == 5);
  auto odd = make(I, 65);
  const Jet j3 = solve_dirichlet(I, 2, ones(odd));
  CHECK(j3.at({0, 0})[32] == doctest::Approx(1.0 / 384).epsilon(1e-12));
  for (std::size_t c = 0; c < g->size(); ++c) CHECK(j2.at({4, 0})[c] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("exact solution on the disk") {
  const Domain D = Domain::disk({0, 0}, 1);
  auto g = make(D, 256);
  const Jet j = solve_dirichlet(D, 1, ones(g));
  CHECK(max_rel_error(j.at({0, 0}), u_d1) < 0.01);
  CHECK(residual_check(D, 1, j, ones(g)) < 0.05);
  CHECK(j.size() == 6);
}

TEST_CASE("fast and direct disk solvers agree") {
  const Domain D = Domain::disk({0.3, -0.2}, 1.5);
  auto g = make(D, 40);
  auto f = SampledField::sample(g, [](const Point& p) { return std::sin(2 * p[0]) + p[1] * p[1]; });
  const Jet a = solve_dirichlet(D, 1, f), b = solve_dirichlet(D, 1, f, SolverMethod::Direct);
  for (const auto& [s, v] : a)
    for (std::size_t c = 0; c < g->size(); ++c) CHECK(std::abs(v[c] - b.at(s)[c]) < 1e-10 * (1 + std::abs(v[c])));
}

TEST_CASE("biharmonic disk by direct quadrature") {
  const Domain D = Domain::disk({0, 0}, 1);
  auto g = make(D, 24);
  const Jet j = solve_dirichlet(D, 2, ones(g));
  CHECK(max_rel_error(j.at({0, 0}), u_d2) < 0.05);
  CHECK(j.size() == 15);
}

TEST_CASE("solver contracts") {
  const Domain I = Domain::interval(0, 1);
  auto g = make(I, 32);
  CHECK_THROWS_WITH_AS(solve_dirichlet(I, 3, ones(g)), "no Green function", Error);
  CHECK_THROWS_AS(solve_dirichlet(Domain::interval(0, 2), 1, ones(g)), Error);

  // zero data, linearity, positivity
  const Jet z = solve_dirichlet(I, 2, SampledField(g));
  CHECK(z.at({0, 0}).max_abs() == 0.0);
  CHECK(residual_check(I, 2, z, SampledField(g)) == 0.0);
  const Domain D = Domain::disk({0, 0}, 1);
  auto gd = make(D, 48);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<double> a(gd->size()), b(gd->size());
  for (std::size_t c = 0; c < a.size(); ++c) a[c] = U(rng), b[c] = U(rng) - 0.5;
  SampledField fa(gd, a), fb(gd, b);
  const Jet ja = solve_dirichlet(D, 1, fa), jb = solve_dirichlet(D, 1, fb), jab = solve_dirichlet(D, 1, fa + fb);
  for (const auto& [s, v] : jab)
    for (std::size_t c = 0; c < gd->size(); ++c) CHECK(std::abs(v[c] - ja.at(s)[c] - jb.at(s)[c]) < 1e-12);
  double lo = 1;
  for (double v : ja.at({0, 0}).values()) lo = std::min(lo, v);
  CHECK(lo >= 0.0);
}

TEST_CASE("residual halves under refinement") {
  const Domain I = Domain::interval(0, 1);
  auto f = [](const Point& p) { return std::cos(3 * p[0]) + p[0]; };
  double prev = 0;
  for (int N : {64, 128}) {
    auto g = make(I, N);
    auto fs = SampledField::sample(g, f);
    const double r = residual_check(I, 1, solve_dirichlet(I, 1, fs), fs);
    CHECK(r < 0.05 * fs.max_abs());
    if (prev > 0) CHECK(r <= 0.6 * prev);
    prev = r;
  }
}

TEST_CASE("pointwise domination by the maximal function") {
  const Domain D = Domain::disk({0, 0}, 1);
  double prev = 0;
  for (int N : {64, 128}) {
    auto g = make(D, N);
    auto f = SampledField::sample(g, [](const Point& p) { return distance(p, {0.4, 0.1}) < 0.3 ? 1.0 : 0.0; });
    const Jet j = solve_dirichlet(D, 1, f);
    const SampledField M = maximal_field(f, operator_radii(*g));
    double C = 0;
    for (std::size_t c = 0; c < g->size(); ++c) C = std::max(C, std::abs(j.at({0, 0})[c]) / M[c]);
    CHECK(std::isfinite(C));
    if (prev > 0) CHECK(std::abs(C - prev) <= 0.1 * prev);
    prev = C;
  }
}
