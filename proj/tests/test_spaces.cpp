#include "doctest.h"

#include <cmath>
#include <random>

#include "morreylab/spaces.hpp"

using namespace morreylab;

namespace {
std::shared_ptr<const Grid> make(const Domain& d, int n) { return std::make_shared<const Grid>(d, n); }
const Ball kAll{{0.5, 0}, 10.0};
const Weight kOne = Weight::constant(1.0);
}  // namespace

TEST_CASE("lp_weighted_norm oracles") {
  auto g = make(Domain::interval(0, 1), 512);
  auto one = SampledField::sample(g, [](const Point&) { return 1.0; });
  auto x = SampledField::sample(g, [](const Point& p) { return p[0]; });
  CHECK(lp_weighted_norm(one, kOne, 2, kAll) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lp_weighted_norm(x, kOne, 2, kAll) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-5));
  CHECK(lp_weighted_norm(one, Weight::power({0, 0}, 1.0, 1), 1, kAll) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(lp_weighted_norm(one, kOne, 2, Ball{{4, 0}, 1}), "empty region", Error);
  CHECK_THROWS_WITH_AS(lp_weighted_norm(one, kOne, 0.5, kAll), "invalid exponent", Error);
}

TEST_CASE("weak norm oracles") {
  auto g = make(Domain::interval(0, 1), 400);
  auto c = SampledField::sample(g, [](const Point&) { return 2.5; });
  CHECK(weak_lp_weighted_norm(c, kOne, 2, kAll) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(weak_lp_weighted_norm(c, kOne, 2, Ball{{0.5, 0}, 0.25}) == doctest::Approx(2.5 * std::sqrt(0.5)).epsilon(1e-12));
  auto ind = SampledField::sample(g, [](const Point& p) { return p[0] > 0.3 && p[0] < 0.6 ? 1.0 : 0.0; });
  CHECK(weak_lp_weighted_norm(ind, kOne, 1, kAll) == doctest::Approx(0.3).epsilon(1e-9));
  auto x = SampledField::sample(g, [](const Point& p) { return p[0]; });
  CHECK(std::abs(weak_lp_weighted_norm(x, kOne, 1, kAll) - 0.25) < 1.0 / 400);
  CHECK(weak_lp_weighted_norm(SampledField(g), kOne, 1, kAll) == 0.0);
}

TEST_CASE("norm axioms and weak <= strong on random fields") {
  auto g = make(Domain::disk({0, 0}, 1), 48);
  std::mt19937 rng(11);
  std::normal_distribution<double> N(0, 1);
  const Weight w = Weight::power({0.2, 0.1}, -0.4, 2);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> a(g->size()), b(g->size());
    for (auto& v : a) v = N(rng);
    for (auto& v : b) v = N(rng);
    SampledField f(g, a), h(g, b);
    const Ball B{{0.1, -0.2}, 0.6};
    for (double p : {1.0, 2.0, 3.0}) {
      const double nf = lp_weighted_norm(f, w, p, B);
      CHECK(lp_weighted_norm(f * -3.0, w, p, B) == doctest::Approx(3 * nf).epsilon(1e-12));
      CHECK(lp_weighted_norm(f + h, w, p, B) <= nf + lp_weighted_norm(h, w, p, B) + 1e-12);
      CHECK(weak_lp_weighted_norm(f, w, p, B) <= nf * (1 + 1e-12));
    }
  }
}

TEST_CASE("morrey_norm oracles") {
  auto g = make(Domain::interval(0, 1), 256);
  auto sweep = ball_sweep(*g, 16, 24);
  auto x = SampledField::sample(g, [](const Point& p) { return p[0]; });
  const auto global = lp_weighted_norm(x, kOne, 2, kAll);
  const auto r = morrey_norm(x, kOne, PhiFunction::inverse_weight_measure(2, kOne), 2, sweep);
  CHECK(r.value == doctest::Approx(global).epsilon(1e-10));
  CHECK(r.value == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-4));

  auto one = SampledField::sample(g, [](const Point&) { return 1.0; });
  const auto pl = morrey_norm(one, kOne, PhiFunction::power_law(0.5, 1, 1), 1, sweep);
  CHECK(pl.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pl.attainingBall.radius == 1.0);

  CHECK(morrey_norm(SampledField(g), kOne, PhiFunction::power_law(0.5, 2, 1), 2, sweep).value == 0.0);
  CHECK_THROWS_WITH_AS(morrey_norm(one, kOne, PhiFunction::power_law(0.5, 2, 1).scaled(-1), 2, sweep),
                       "invalid phi", Error);
}

TEST_CASE("morrey_norm: collapse to the global norm for weighted cases and both prefactors") {
  auto g = make(Domain::disk({0, 0}, 1), 64);
  auto sweep = ball_sweep(*g, 6, 10);
  const Weight w = Weight::power({0, 0}, 0.5, 2);
  auto f = SampledField::sample(g, [](const Point& p) { return std::sin(3 * p[0]) + p[1] * p[1]; });
  for (double p : {1.5, 2.0}) {
    const double global = lp_weighted_norm(f, w, p, Ball{{0, 0}, 5});
    MorreyEvaluator ev(g, sweep, w, p);
    CHECK(ev.norm(f, PhiFunction::inverse_weight_measure(p, w)).value == doctest::Approx(global).epsilon(1e-6));
  }
  MorreyEvaluator full(g, sweep, w, 2, Prefactor::FullBall);
  CHECK(full.norm(f, PhiFunction::power_law(1.0, 2, 2)).value > 0.0);
}

TEST_CASE("attaining ball is invariant under scaling of w for power-law phi") {
  auto g = make(Domain::interval(0, 1), 128);
  auto sweep = ball_sweep(*g, 10, 16);
  auto f = SampledField::sample(g, [](const Point& p) { return std::exp(-30 * (p[0] - 0.3) * (p[0] - 0.3)); });
  const Weight w = Weight::power({0, 0}, 0.5, 1);
  const auto phi = PhiFunction::power_law(0.5, 2, 1);
  const auto a = morrey_norm(f, w, phi, 2, sweep);
  const auto b = morrey_norm(f, w.scaled(9.0), phi, 2, sweep);
  CHECK(a.attainingBall.center == b.attainingBall.center);
  CHECK(a.attainingBall.radius == b.attainingBall.radius);
  CHECK(b.value == doctest::Approx(a.value).epsilon(1e-12));
}

TEST_CASE("sobolev_morrey_norm") {
  auto g = make(Domain::interval(0, 1), 1024);
  auto sweep = ball_sweep(*g, 8, 8);
  const auto phi = PhiFunction::inverse_weight_measure(2, kOne);
  Jet lin{{{0, 0}, SampledField::sample(g, [](const Point& p) { return p[0]; })},
          {{1, 0}, SampledField::sample(g, [](const Point&) { return 1.0; })}};
  CHECK(sobolev_morrey_norm(lin, 1, kOne, phi, 2, sweep) == doctest::Approx(1 / std::sqrt(3.0) + 1).epsilon(1e-5));
  CHECK_THROWS_WITH_AS(sobolev_morrey_norm(lin, 2, kOne, phi, 2, sweep), "incomplete jet", Error);

  Jet quad{{{0, 0}, SampledField::sample(g, [](const Point& p) { return p[0] * (1 - p[0]) / 2; })},
           {{1, 0}, SampledField::sample(g, [](const Point& p) { return 0.5 - p[0]; })},
           {{2, 0}, SampledField::sample(g, [](const Point&) { return -1.0; })}};
  const double expect = std::sqrt(1.0 / 120) + std::sqrt(1.0 / 12) + 1.0;
  CHECK(sobolev_morrey_norm(quad, 2, kOne, phi, 2, sweep) == doctest::Approx(expect).epsilon(1e-5));

  Jet zero{{{0, 0}, SampledField(g)}, {{1, 0}, SampledField(g)}};
  CHECK(sobolev_morrey_norm(zero, 1, kOne, phi, 2, sweep) == 0.0);
}

TEST_CASE("condition checker: power law closed form") {
  const double d = 1.0;
  const auto rGrid = log_space(1e-24 * d, d, 40);
  for (int n : {1, 2}) {
    const Point x{0, 0};
    for (double frac : {0.25, 0.5, 0.75})
      for (double p : {1.5, 2.0, 3.0}) {
        const double lambda = frac * n;
        const auto phi = PhiFunction::power_law(lambda, p, n);
        const auto res = check_phi_condition(phi, phi, kOne, p, x, n, rGrid, 10 * d);
        const double expect = p / (n - lambda);
        CHECK(std::abs(res.constant - expect) / expect < 0.02);
        CHECK_FALSE(res.gridSensitive);
      }
  }
}

TEST_CASE("condition checker: scaling and truncation sensitivity") {
  const auto rGrid = log_space(1e-6, 1.0, 20);
  const auto phi = PhiFunction::power_law(0.5, 2, 1);
  const auto a = check_phi_condition(phi, phi, kOne, 2, {0, 0}, 1, rGrid, 10.0);
  const auto b = check_phi_condition(phi, phi.scaled(2.0), kOne, 2, {0, 0}, 1, rGrid, 10.0);
  CHECK(b.constant == doctest::Approx(a.constant / 2).epsilon(1e-14));

  // constant phi: the integral grows like log(U/r), which the checker must flag
  const auto flat = PhiFunction::power_law(1.0, 2, 1);
  const auto c = check_phi_condition(flat, flat, kOne, 2, {0, 0}, 1, rGrid, 10.0);
  CHECK(c.truncationSensitive);
  CHECK(std::isfinite(c.constant));
}
