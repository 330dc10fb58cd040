#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "morreylab/grid.hpp"

using namespace morreylab;

namespace {
std::shared_ptr<const Grid> make(const Domain& d, int n) { return std::make_shared<const Grid>(d, n); }
}  // namespace

TEST_CASE("integrate: constants and monomials on the unit interval") {
  for (int n : {16, 64, 256}) {
    auto g = make(Domain::interval(0, 1), n);
    CHECK(std::abs(integrate(SampledField::sample(g, [](const Point&) { return 1.0; })) - 1.0) <= 1.0 / n);
    CHECK(std::abs(integrate(SampledField::sample(g, [](const Point& p) { return p[0]; })) - 0.5) <= 1.0 / n);
  }
}

TEST_CASE("integrate: disk area within 2% at N=256") {
  auto g = make(Domain::disk({0, 0}, 1), 256);
  const double area = integrate(SampledField::sample(g, [](const Point&) { return 1.0; }));
  CHECK(std::abs(area - std::numbers::pi) / std::numbers::pi < 0.02);
}

TEST_CASE("integrate: empty region throws") {
  auto g = make(Domain::interval(0, 1), 8);
  SampledField f(g);
  CHECK_THROWS_WITH_AS(integrate(f, Ball{{5.0, 0.0}, 0.1}), "empty region", Error);
}

TEST_CASE("integrate: linear, monotone, first-order refinement") {
  auto g = make(Domain::disk({0.3, -0.2}, 0.7), 64);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> a(g->size()), b(g->size());
  for (auto& v : a) v = U(rng);
  for (std::size_t k = 0; k < b.size(); ++k) b[k] = a[k] + std::abs(U(rng));
  SampledField fa(g, a), fb(g, b);
  const Ball B{{0.3, -0.1}, 0.4};
  CHECK(integrate(fa * 2.0 - fb, B) == doctest::Approx(2 * integrate(fa, B) - integrate(fb, B)).epsilon(1e-12));
  CHECK(integrate(fa, B) <= integrate(fb, B));

  auto lip = [](const Point& p) { return std::abs(p[0] - 0.1); };
  for (int n : {32, 64, 128, 256}) {
    auto gi = make(Domain::interval(0, 1), n);
    CHECK(std::abs(integrate(SampledField::sample(gi, lip)) - 0.41) <= 1.0 / n);
  }
}

TEST_CASE("grid nodes are strictly interior to their cells and off the boundary") {
  for (const Domain& d : {Domain::interval(-1, 2), Domain::disk({0, 0}, 1)}) {
    auto g = make(d, 50);
    for (std::size_t k = 0; k < g->size(); ++k) {
      CHECK(d.boundary_distance(g->node(k)) > 0.0);
      CHECK(g->locate(g->node(k)) == static_cast<long>(k));
    }
  }
}

TEST_CASE("domain geometry") {
  const Domain I = Domain::interval(0, 2);
  CHECK(I.diameter() == 2.0);
  CHECK(I.boundary_distance({0.5, 0}) == 0.5);
  CHECK(I.boundary_distance({0.0, 0}) == 0.0);
  const Domain D = Domain::disk({1, 1}, 2);
  CHECK(D.diameter() == 4.0);
  CHECK(D.boundary_distance({1, 2}) == doctest::Approx(1.0));
}

TEST_CASE("ball_sweep construction") {
  auto gi = make(Domain::interval(0, 1), 32);
  auto s = ball_sweep(*gi, 3, 2);
  REQUIRE(s.size() == 6);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(s[k].radius == (k % 2 == 0 ? gi->spacing() : 1.0));

  auto gd = make(Domain::disk({0, 0}, 1), 32);
  auto sd = ball_sweep(*gd, 2, 3);
  CHECK(sd.size() <= 12);
  double rmax = 0;
  for (const Ball& b : sd) {
    CHECK(gd->domain().contains(b.center));
    rmax = std::max(rmax, b.radius);
  }
  CHECK(rmax == 2.0);
  CHECK_THROWS_AS(ball_sweep(*gd, 1, 3), Error);
}

TEST_CASE("sweep index agrees with direct summation") {
  auto g = make(Domain::disk({0, 0}, 1), 40);
  auto sweep = ball_sweep(*g, 5, 9);
  SweepIndex idx(g, sweep);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  std::vector<double> v(g->size());
  for (auto& x : v) x = U(rng);
  const auto sums = idx.sums(v);
  const auto counts = idx.counts();
  const auto maxima = idx.maxima(v);
  for (std::size_t b = 0; b < sweep.size(); ++b) {
    double s = 0, m = -INFINITY;
    std::size_t c = 0;
    for (std::size_t k = 0; k < g->size(); ++k)
      if (sweep[b].contains(g->node(k))) {
        s += v[k];
        m = std::max(m, v[k]);
        ++c;
      }
    CHECK(sums[b] == doctest::Approx(s).epsilon(1e-12));
    CHECK(counts[b] == c);
    CHECK(maxima[b] == m);
  }
}

TEST_CASE("multi-indices") {
  CHECK(multi_indices(1, 3).size() == 1);
  CHECK(multi_indices(2, 3).size() == 4);
  CHECK(multi_indices_up_to(2, 2).size() == 6);
  CHECK(multi_indices_up_to(1, 4).size() == 5);
}

TEST_CASE("log_space has exact endpoints") {
  auto v = log_space(1e-3, 2.0, 7);
  CHECK(v.front() == 1e-3);
  CHECK(v.back() == 2.0);
  for (std::size_t k = 1; k < v.size(); ++k) CHECK(v[k] > v[k - 1]);
}
