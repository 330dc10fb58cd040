#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "morreylab/operators.hpp"

using namespace morreylab;

namespace {
std::shared_ptr<const Grid> make(const Domain& d, int n, int pad = 0) { return std::make_shared<const Grid>(d, n, pad); }

double bump(const Point& p, const Point& c, double r) {
  const double s = distance(p, c) / r;
  return s < 1 ? std::exp(-1 / (1 - s * s)) : 0.0;
}

// 1 inside radius a, 0 outside b, smooth in between
double smooth_step(double r, double a, double b) {
  auto e = [](double t) { return t > 0 ? std::exp(-1 / t) : 0.0; };
  const double t = (b - r) / (b - a);
  return e(t) / (e(t) + e(1 - t));
}
}  // namespace

TEST_CASE("CZ kernel cancellation and bound") {
  CZKernel k(2, 1, {2, 0});
  CHECK(std::abs(k.angular_mean()) < 1e-12);
  CHECK(k.bound() == doctest::Approx(1 / (2 * std::numbers::pi)).epsilon(1e-6));
  CHECK(k({1, 0}) == doctest::Approx(-k({0, 1})));
  CZKernel k4(2, 2, {2, 2});
  CHECK(std::abs(k4.angular_mean()) < 1e-8 * k4.bound());
  CHECK(CZKernel(1, 1, {2, 0}).vanishes());
  CHECK_THROWS_AS(CZKernel(2, 1, {1, 0}), Error);
}

TEST_CASE("maximal function oracles") {
  auto g = make(Domain::interval(-1, 1), 200);
  auto one = SampledField::sample(g, [](const Point&) { return 1.0; });
  CHECK(maximal(one, {0, 0}, operator_radii(*g)) == doctest::Approx(1.0).epsilon(1e-14));

  auto g8 = make(Domain::interval(-4, 4), 800);
  auto ind = SampledField::sample(g8, [](const Point& p) { return std::abs(p[0]) < 1 ? 1.0 : 0.0; });
  std::vector<double> ts;
  for (int k = 1; k <= 800; ++k) ts.push_back(0.01 * k);
  CHECK(maximal(ind, {2, 0}, ts) == doctest::Approx(1.0 / 3).epsilon(1e-12));

  auto gd = make(Domain::disk({0, 0}, 1), 64);
  auto b = SampledField::sample(gd, [](const Point& p) { return bump(p, {0.3, 0}, 0.5); });
  const Point x{-0.2, 0.1};
  const double M = maximal(b, x, operator_radii(*gd));
  for (double t : {0.1, 0.4, 0.9}) {
    double s = 0;
    std::size_t n = lattice_count(*gd, x, t);
    for (std::size_t c = 0; c < gd->size(); ++c)
      if (distance(gd->node(c), x) < t) s += b[c];
    CHECK(M >= s / n - 1e-15);
  }
}

TEST_CASE("maximal function is sublinear, homogeneous and ignores padding") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> U(-1, 1);
  auto g = make(Domain::disk({0, 0}, 1), 40);
  std::vector<double> a(g->size()), b(g->size());
  for (std::size_t c = 0; c < g->size(); ++c) a[c] = U(rng), b[c] = U(rng);
  SampledField f(g, a), h(g, b);
  const auto R = operator_radii(*g, 16);
  for (const Point& x : {Point{0, 0}, Point{0.5, -0.3}, Point{-0.9, 0.1}}) {
    CHECK(maximal(f + h, x, R) <= maximal(f, x, R) + maximal(h, x, R) + 1e-14);
    CHECK(maximal(f * -3.0, x, R) == doctest::Approx(3 * maximal(f, x, R)).epsilon(1e-13));
  }
  auto gp = make(Domain::disk({0, 0}, 1), 40, 6);
  auto fn = [](const Point& p) { return std::sin(3 * p[0]) * std::cos(2 * p[1]); };
  auto f0 = SampledField::sample(g, fn), f1 = SampledField::sample(gp, fn);
  CZKernel k(2, 1, {1, 1});
  for (const Point& x : {Point{0.1, 0.2}, Point{-0.6, -0.4}}) {
    CHECK(std::abs(maximal(f0, x, R) - maximal(f1, x, R)) < 1e-12);
    CHECK(std::abs(truncated_singular(f0, k, x, 0.1) - truncated_singular(f1, k, x, 0.1)) < 1e-12);
  }
  auto M0 = maximal_field(f0, R), M1 = maximal_field(f1, R);
  double worst = 0;
  for (std::size_t c = 0; c < g->size(); ++c) worst = std::max(worst, std::abs(M0[c] - M1[gp->locate(g->node(c))]));
  CHECK(worst < 1e-12);
}

TEST_CASE("truncated singular integral oracles") {
  auto g = make(Domain::disk({0, 0}, 2), 128);
  CZKernel k(2, 1, {2, 0});
  auto ind = SampledField::sample(g, [](const Point& p) { return norm(p) < 1 ? 1.0 : 0.0; });
  for (double e : {g->spacing(), 0.3, 0.9}) CHECK(std::abs(truncated_singular(ind, k, {0, 0}, e)) < 1e-10);
  auto odd = SampledField::sample(g, [](const Point& p) { return p[0] * bump(p, {0, 0.2}, 1.0); });
  CHECK(std::abs(truncated_singular(odd, k, {0, 0.3}, 0.05)) < 1e-12);
  CHECK_THROWS_WITH_AS(truncated_singular(ind, k, {0, 0}, 0.5 * g->spacing()), "truncation below resolution", Error);

  // away from the support: compare with 4x oversampled quadrature of the bump
  auto fb = [](const Point& p) { return bump(p, {-0.8, 0.3}, 0.5); };
  auto b = SampledField::sample(g, fb);
  const Point x{0.9, -0.4};
  const double v = truncated_singular(b, k, x, g->spacing());
  auto g4 = make(Domain::disk({0, 0}, 2), 512);
  auto b4 = SampledField::sample(g4, fb);
  const double v4 = truncated_singular(b4, k, x, g->spacing());
  CHECK(std::abs(v - v4) <= 1e-4 * std::abs(v4));
}

TEST_CASE("maximal singular operator oracles") {
  auto g = make(Domain::disk({0, 0}, 3), 96);
  CZKernel k(2, 1, {2, 0});
  auto ind = SampledField::sample(g, [](const Point& p) { return norm(p) < 1 ? 1.0 : 0.0; });
  const auto eps = operator_radii(*g);
  CHECK(maximal_singular(ind, k, {0, 0}, eps) < 1e-10);
  const Point x{2, 0};
  CHECK(truncated_singular(ind, k, x, g->spacing()) == doctest::Approx(truncated_singular(ind, k, x, 0.5)).epsilon(1e-6));
  auto b = SampledField::sample(g, [](const Point& p) { return bump(p, {0.5, 0.5}, 1.2); });
  const double ks = maximal_singular(b, k, {0.4, 0.2}, eps);
  for (double e : eps) CHECK(ks >= std::abs(truncated_singular(b, k, {0.4, 0.2}, e)));
}

TEST_CASE("operator fields agree with pointwise evaluation") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const Domain& d : {Domain::interval(0, 1), Domain::disk({0.1, 0}, 1)}) {
    auto g = make(d, 48, 2);
    std::vector<double> a(g->size());
    for (double& v : a) v = U(rng);
    SampledField f(g, a);
    const auto R = operator_radii(*g, 20);
    const SampledField M = maximal_field(f, R);
    CZKernel k(d.dim(), 1, d.dim() == 1 ? MultiIndex{2, 0} : MultiIndex{1, 1});
    const SampledField KS = maximal_singular_field(f, k, R);
    const SampledField KE = truncated_singular_field(f, k, R[3]);
    for (std::size_t c = 0; c < g->size(); c += 7) {
      const Point& x = g->node(c);
      CHECK(std::abs(M[c] - maximal(f, x, R)) < 1e-12);
      CHECK(std::abs(KS[c] - maximal_singular(f, k, x, R)) < 1e-10);
      CHECK(std::abs(KE[c] - truncated_singular(f, k, x, R[3])) < 1e-10);
    }
  }
}

TEST_CASE("singular identity for the Newtonian potential") {
  auto g = make(Domain::disk({0, 0}, 2), 128);
  auto f = SampledField::sample(g, [](const Point& p) { return smooth_step(norm(p), 0.8, 1.2); });
  const IdentityReport r = singular_identity_check(f, {2, 0}, {1, 0}, Point{0, 0});
  CHECK(std::abs(r.kf) < 1e-10);
  CHECK(r.aEstimate == doctest::Approx(-0.5).epsilon(0.02));
  CHECK(r.traceError < 0.02);
  CHECK(r.maxDiscrepancy < 0.05);
  CHECK(r.interiorNodes > 0);
  CHECK(r.skippedNodes > 0);
  const IdentityReport z = singular_identity_check(SampledField(g), {1, 1}, {0, 1});
  CHECK(z.lhs == 0.0);
  CHECK(z.kf == 0.0);
  CHECK(z.traceError == 0.0);
}
