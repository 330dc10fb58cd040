#include "doctest.h"

#include <cmath>
#include <random>

#include "morreylab/lattice.hpp"

using namespace morreylab;

namespace {
// tensor Gauss on a k x k subdivision of the unit square centred at (ox, oy)
template <class F>
double brute(F&& fn, double ox, double oy, int k) {
  const GaussRule g = gauss_legendre01(8);
  double s = 0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (std::size_t p = 0; p < g.x.size(); ++p)
        for (std::size_t q = 0; q < g.x.size(); ++q) {
          const double x = ox - 0.5 + (a + g.x[p]) / k, y = oy - 0.5 + (b + g.x[q]) / k;
          s += g.w[p] * g.w[q] * fn(x, y) / (k * k);
        }
  return s;
}
}  // namespace

TEST_CASE("cell integrals of ln|w| and its gradient") {
  for (auto [ox, oy] : std::vector<std::pair<double, double>>{{1, 0}, {2, 1}, {-3, 2}, {0, -5}, {7.5, 0.25}, {40, 3}}) {
    const double L = brute([](double x, double y) { return 0.5 * std::log(x * x + y * y); }, ox, oy, 16);
    CHECK(cell_log_integral(ox, oy) == doctest::Approx(L).epsilon(1e-9));
    for (int axis : {0, 1}) {
      const double G = brute([&](double x, double y) { return (axis == 0 ? x : y) / (x * x + y * y); }, ox, oy, 16);
      CHECK(std::abs(cell_grad_log_integral(ox, oy, axis) - G) < 1e-9);
    }
  }
  // the singular cell: (ln(1/2) - 3 + π/2) / 2 in closed form
  CHECK(cell_log_integral(0, 0) == doctest::Approx((std::log(0.5) - 3 + std::acos(-1.0) / 2) / 2).epsilon(1e-13));
  CHECK(cell_grad_log_integral(0, 0, 0) == doctest::Approx(0.0));
}

TEST_CASE("Duffy quadrature removes the corner singularity") {
  double area = 0, inv = 0;
  singular_cell_quadrature({0, 0}, 1.0, {0, 0}, 8, [&](const Point& y, double w) {
    area += w;
    inv += w / norm(y);
  });
  CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(inv == doctest::Approx(4 * std::log(1 + std::sqrt(2.0))).epsilon(1e-10));
  double off = 0;
  singular_cell_quadrature({0, 0}, 2.0, {0.3, -0.7}, 6, [&](const Point&, double w) { off += w; });
  CHECK(off == doctest::Approx(4.0).epsilon(1e-14));
  CHECK_THROWS_AS(gauss_legendre01(5), Error);
}

TEST_CASE("lattice convolution matches the direct sum") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (const Domain& d : {Domain::interval(0, 1), Domain::disk({0, 0}, 1)}) {
    auto g = std::make_shared<const Grid>(d, 20, 1);
    std::vector<double> v(g->size());
    for (double& x : v) x = U(rng);
    auto K = [](int di, int dj) { return std::cos(0.3 * di) + 0.1 * dj * dj - 0.2 * di * dj; };
    LatticeConvolver conv(g);
    const std::vector<double> out = conv.convolve(v, K);
    for (std::size_t i = 0; i < g->size(); ++i) {
      double s = 0;
      for (std::size_t j = 0; j < g->size(); ++j) s += K(g->cell(i).i - g->cell(j).i, g->cell(i).j - g->cell(j).j) * v[j];
      CHECK(std::abs(out[i] - s) < 1e-12 * (1 + std::abs(s)));
    }
  }
}
