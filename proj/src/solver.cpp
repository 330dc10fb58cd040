#include "morreylab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "morreylab/lattice.hpp"

namespace morreylab {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<MultiIndex> quadrature_orders(int dim, int m) { return multi_indices_up_to(dim, 2 * m - 1); }

Jet empty_jet(const std::shared_ptr<const Grid>& grid, int m) {
  Jet jet;
  for (const MultiIndex& s : multi_indices_up_to(grid->dim(), 2 * m)) jet.emplace(s, SampledField(grid));
  return jet;
}

void top_order_by_differences(Jet& jet, int dim, int m) {
  for (const MultiIndex& s : multi_indices(dim, 2 * m)) {
    const int axis = s[0] > 0 ? 0 : 1;
    MultiIndex lower = s;
    --lower[axis];
    jet[s] = difference(jet.at(lower), axis);
  }
}

// Interval: ∂^k_x G(x_i, ·) integrated exactly over every cell (the kernel
// is a polynomial in y on either side of x; 3-point Gauss on each side).
void solve_interval(const GreenFunction& g, const SampledField& f, Jet& jet, int m) {
  const Grid& grid = f.grid();
  const double h = grid.spacing();
  const GaussRule q = gauss_legendre01(3);
  const int top = 2 * m - 1;
  std::vector<std::vector<double>*> out;
  for (int k = 0; k <= top; ++k) out.push_back(&jet.at({k, 0}).mutable_values());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.node(i);
    std::vector<double> acc(top + 1, 0.0);
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (f[j] == 0.0) continue;
      const double lo = grid.node(j)[0] - 0.5 * h, hi = grid.node(j)[0] + 0.5 * h;
      std::array<std::pair<double, double>, 2> pieces{{{lo, hi}, {0.0, 0.0}}};
      int np = 1;
      if (x[0] > lo && x[0] < hi) {
        pieces = {{{lo, x[0]}, {x[0], hi}}};
        np = 2;
      }
      for (int p = 0; p < np; ++p) {
        const double a = pieces[p].first, len = pieces[p].second - pieces[p].first;
        for (std::size_t k = 0; k < q.x.size(); ++k) {
          const KernelJet J = g.jet(x, {a + len * q.x[k], 0.0});
          const double w = len * q.w[k] * f[j];
          for (int d = 0; d <= top; ++d) acc[d] += w * J.derivative(d, 0);
        }
      }
    }
    for (int d = 0; d <= top; ++d) (*out[d])[i] = acc[d];
  }
}

// Γ = -(1/2π) ln|z| integrated over cells: value and gradient kernels on
// lattice offsets.
double gamma_cell(int di, int dj, double h) { return -h * h / (2.0 * kPi) * (cell_log_integral(di, dj) + std::log(h)); }
double gamma_grad_cell(int di, int dj, double h, int axis) {
  return -h / (2.0 * kPi) * cell_grad_log_integral(di, dj, axis);
}

// h(x,y) = (1/4π) ln(|X|^2|Y|^2/R^2 - 2X·Y + R^2), centred coordinates.
struct RegularPart {
  double R;
  double value(const Point& X, const Point& Y) const {
    return std::log(D(X, Y)) / (4.0 * kPi);
  }
  double grad(const Point& X, const Point& Y, int a) const {
    const double yy = Y[0] * Y[0] + Y[1] * Y[1];
    return (2.0 * X[a] * yy / (R * R) - 2.0 * Y[a]) / D(X, Y) / (4.0 * kPi);
  }
  double D(const Point& X, const Point& Y) const {
    const double xx = X[0] * X[0] + X[1] * X[1], yy = Y[0] * Y[0] + Y[1] * Y[1];
    return xx * yy / (R * R) - 2.0 * (X[0] * Y[0] + X[1] * Y[1]) + R * R;
  }

  // Integrals over the y-cell of side s centred at Y. With X* = R^2 X/|X|^2,
  // h = (1/2π)[ln(|X|/R) + ln|Y - X*|]; when X* is within a few cells of Y
  // (both points hugging the circle) the midpoint rule is useless and the
  // log part is integrated exactly.
  bool near(const Point& X, const Point& Y, double s, Point& o) const {
    const double xx = X[0] * X[0] + X[1] * X[1];
    if (xx < 0.25 * R * R) return false;
    o = {(R * R * X[0] / xx - Y[0]) / s, (R * R * X[1] / xx - Y[1]) / s};
    return o[0] * o[0] + o[1] * o[1] < kNearCells * kNearCells;
  }
  double cell_value(const Point& X, const Point& Y, double s) const {
    Point o;
    if (!near(X, Y, s, o)) return s * s * value(X, Y);
    const double rx = std::hypot(X[0], X[1]);
    return s * s / (2.0 * kPi) * (std::log(rx / R) + std::log(s) + cell_log_integral(o[0], o[1]));
  }
  double cell_grad(const Point& X, const Point& Y, double s, int a) const {
    Point o;
    if (!near(X, Y, s, o)) return s * s * grad(X, Y, a);
    const double xx = X[0] * X[0] + X[1] * X[1];
    // chain rule through X -> X*: dX*/dX = (R^2/|X|^2)(I - 2 X X^T/|X|^2)
    double v = s * s * X[a] / xx;
    for (int b = 0; b < 2; ++b)
      v += R * R / xx * ((a == b ? 1.0 : 0.0) - 2.0 * X[a] * X[b] / xx) * s * cell_grad_log_integral(o[0], o[1], b);
    return v / (2.0 * kPi);
  }
  static constexpr double kNearCells = 6.0;
};

Point centred(const Point& p, const Point& c) { return {p[0] - c[0], p[1] - c[1]}; }

void solve_disk1_direct(const Domain& dom, const SampledField& f, Jet& jet) {
  const Grid& grid = f.grid();
  const double h = grid.spacing();
  const int E = grid.extent();
  const int W = 2 * E - 1;
  std::vector<double> k0(W * W), k1(W * W), k2(W * W);
  for (int dj = -E + 1; dj < E; ++dj)
    for (int di = -E + 1; di < E; ++di) {
      const std::size_t t = static_cast<std::size_t>(dj + E - 1) * W + (di + E - 1);
      k0[t] = gamma_cell(di, dj, h);
      k1[t] = gamma_grad_cell(di, dj, h, 0);
      k2[t] = gamma_grad_cell(di, dj, h, 1);
    }
  const RegularPart hp{dom.radius()};
  auto& u = jet.at({0, 0}).mutable_values();
  auto& u1 = jet.at({1, 0}).mutable_values();
  auto& u2 = jet.at({0, 1}).mutable_values();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Cell& ci = grid.cell(i);
    const Point X = centred(ci.center, dom.center());
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (f[j] == 0.0) continue;
      const Cell& cj = grid.cell(j);
      const std::size_t t = static_cast<std::size_t>(ci.j - cj.j + E - 1) * W + (ci.i - cj.i + E - 1);
      const Point Y = centred(cj.center, dom.center());
      s0 += f[j] * (k0[t] + hp.cell_value(X, Y, h));
      s1 += f[j] * (k1[t] + hp.cell_grad(X, Y, h, 0));
      s2 += f[j] * (k2[t] + hp.cell_grad(X, Y, h, 1));
    }
    u[i] = s0;
    u1[i] = s1;
    u2[i] = s2;
  }
}

// Midpoint h part: (1/2π)[ln R + ln|1 - x conj(y)/R^2|] summed as a power
// series in ζ = x conj(y)/R^2 except for pairs with both points in the thin
// outer annulus |·| > ρ1 R, which are summed directly. Each point keeps only
// the powers that still matter (|z|^k above 1e-17).
void disk1_regular_fast(const Domain& dom, const SampledField& f, std::vector<double>& u, std::vector<double>& u1,
                        std::vector<double>& u2) {
  using C = std::complex<double>;
  const Grid& grid = f.grid();
  const double R = dom.radius(), A = grid.cell_measure(), h = grid.spacing();
  const std::size_t n = grid.size();
  // the annulus must hold every pair that RegularPart integrates exactly
  const double rho1 =
      1.0 - std::clamp(std::max(2.0 / std::sqrt(static_cast<double>(n)), (RegularPart::kNearCells + 2.0) * h / R), 1e-3, 0.5);
  constexpr double kDigits = 39.0;  // -ln 1e-17
  auto terms = [&](double r) { return r <= 0.0 ? 0 : static_cast<int>(std::ceil(kDigits / -std::log(r))); };
  const int K = terms(rho1);

  std::vector<C> z(n);
  std::vector<char> outer(n);
  double total = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    const Point X = centred(grid.node(c), dom.center());
    z[c] = C(X[0], X[1]) / R;
    outer[c] = std::abs(z[c]) > rho1;
    total += f[c];
  }
  // moments over all y (needed by inner x, |ζ| < |z_x| <= ρ1) and over inner
  // y (needed by outer x, |ζ| < |z_y| <= ρ1)
  std::vector<C> mAll(K + 1, 0.0), mIn(K + 1, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    if (f[c] == 0.0) continue;
    const C zb = std::conj(z[c]);
    const int kc = std::min(K, terms(std::abs(z[c])));
    C p = f[c];
    if (outer[c]) {
      for (int k = 1; k <= kc; ++k) mAll[k] += (p *= zb);
    } else {
      for (int k = 1; k <= kc; ++k) {
        p *= zb;
        mAll[k] += p;
        mIn[k] += p;
      }
    }
  }
  const RegularPart hp{R};
  std::vector<std::size_t> outerIdx;
  for (std::size_t c = 0; c < n; ++c)
    if (outer[c] && f[c] != 0.0) outerIdx.push_back(c);
  const double lnR = std::log(R);
  for (std::size_t c = 0; c < n; ++c) {
    const std::vector<C>& mom = outer[c] ? mIn : mAll;
    const int kc = outer[c] ? K : std::min(K, terms(std::abs(z[c])));
    C F = 0.0, Fp = 0.0, p = 1.0;  // p = z^{k-1}
    for (int k = 1; k <= kc; ++k) {
      Fp += p * mom[k];
      p *= z[c];
      F += p * (mom[k] / static_cast<double>(k));
    }
    Fp /= R;
    double v = A / (2.0 * kPi) * (lnR * total - F.real());
    double g1 = -A / (2.0 * kPi) * Fp.real();
    double g2 = A / (2.0 * kPi) * Fp.imag();
    if (outer[c]) {
      const Point X = centred(grid.node(c), dom.center());
      // outer y: the ln R part is already in `total`; add the rest directly
      for (std::size_t j : outerIdx) {
        const Point Y = centred(grid.node(j), dom.center());
        v += f[j] * (hp.cell_value(X, Y, h) - A * lnR / (2.0 * kPi));
        g1 += f[j] * hp.cell_grad(X, Y, h, 0);
        g2 += f[j] * hp.cell_grad(X, Y, h, 1);
      }
    }
    u[c] += v;
    u1[c] += g1;
    u2[c] += g2;
  }
}

void solve_disk1_fast(const Domain& dom, const SampledField& f, Jet& jet) {
  const auto& grid = f.grid_ptr();
  const double h = grid->spacing();
  LatticeConvolver conv(grid);
  const auto spec = conv.transform_field(f.values());
  auto& u = jet.at({0, 0}).mutable_values();
  auto& u1 = jet.at({1, 0}).mutable_values();
  auto& u2 = jet.at({0, 1}).mutable_values();
  u = conv.apply(spec, conv.transform_kernel([&](int di, int dj) { return gamma_cell(di, dj, h); }));
  u1 = conv.apply(spec, conv.transform_kernel([&](int di, int dj) { return gamma_grad_cell(di, dj, h, 0); }));
  u2 = conv.apply(spec, conv.transform_kernel([&](int di, int dj) { return gamma_grad_cell(di, dj, h, 1); }));
  disk1_regular_fast(dom, f, u, u1, u2);
}

// Any implemented (domain, m): singular cells by Duffy-Gauss, midpoint
// elsewhere.
void solve_generic_direct(const GreenFunction& g, const SampledField& f, Jet& jet, int m) {
  const Grid& grid = f.grid();
  const double h = grid.spacing(), A = grid.cell_measure();
  const std::vector<MultiIndex> orders = quadrature_orders(grid.dim(), m);
  std::vector<std::vector<double>*> out;
  for (const MultiIndex& s : orders) out.push_back(&jet.at(s).mutable_values());
  std::vector<double> acc(orders.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Cell& ci = grid.cell(i);
    std::fill(acc.begin(), acc.end(), 0.0);
    auto add = [&](const Point& y, double w) {
      const KernelJet J = g.jet(ci.center, y);
      for (std::size_t q = 0; q < orders.size(); ++q) acc[q] += w * J.derivative(orders[q][0], orders[q][1]);
    };
    for (std::size_t j = 0; j < grid.size(); ++j) {
      if (f[j] == 0.0) continue;
      const Cell& cj = grid.cell(j);
      if (std::max(std::abs(ci.i - cj.i), std::abs(ci.j - cj.j)) <= 1) {
        singular_cell_quadrature(cj.center, h, ci.center, 6, [&](const Point& y, double w) { add(y, w * f[j]); });
      } else {
        add(cj.center, A * f[j]);
      }
    }
    for (std::size_t q = 0; q < orders.size(); ++q) (*out[q])[i] = acc[q];
  }
}

}  // namespace

SampledField difference(const SampledField& u, int axis) {
  const Grid& g = u.grid();
  const double h = g.spacing();
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Cell& cell = g.cell(c);
    const long p = axis == 0 ? g.index_of(cell.i + 1, cell.j) : g.index_of(cell.i, cell.j + 1);
    const long q = axis == 0 ? g.index_of(cell.i - 1, cell.j) : g.index_of(cell.i, cell.j - 1);
    if (p >= 0 && q >= 0)
      v[c] = (u[p] - u[q]) / (2.0 * h);
    else if (p >= 0)
      v[c] = (u[p] - u[c]) / h;
    else if (q >= 0)
      v[c] = (u[c] - u[q]) / h;
  }
  return SampledField(u.grid_ptr(), std::move(v));
}

Jet solve_dirichlet(const Domain& domain, int m, const SampledField& f, SolverMethod method) {
  const GreenFunction g(domain, m);  // throws "no Green function"
  const auto& grid = f.grid_ptr();
  if (grid->domain().kind() != domain.kind() || grid->domain().describe() != domain.describe())
    throw Error("field grid does not cover the domain");
  if (!f.all_finite()) throw Error("right-hand side is not finite");
  Jet jet = empty_jet(grid, m);
  if (domain.kind() == Domain::Kind::Interval)
    solve_interval(g, f, jet, m);
  else if (m == 1)
    method == SolverMethod::Direct ? solve_disk1_direct(domain, f, jet) : solve_disk1_fast(domain, f, jet);
  else
    solve_generic_direct(g, f, jet, m);
  top_order_by_differences(jet, grid->dim(), m);
  return jet;
}

double residual_check(const Domain& domain, int m, const Jet& jet, const SampledField& f) {
  const SampledField& u = jet.at({0, 0});
  const Grid& g = u.grid();
  const double h = g.spacing();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> v(u.values().begin(), u.values().end());
  for (int rep = 0; rep < m; ++rep) {
    std::vector<double> next(g.size(), nan);
    for (std::size_t c = 0; c < g.size(); ++c) {
      const Cell& cell = g.cell(c);
      std::vector<long> nb{g.index_of(cell.i + 1, cell.j), g.index_of(cell.i - 1, cell.j)};
      if (g.dim() == 2) {
        nb.push_back(g.index_of(cell.i, cell.j + 1));
        nb.push_back(g.index_of(cell.i, cell.j - 1));
      }
      if (std::any_of(nb.begin(), nb.end(), [](long k) { return k < 0; })) continue;
      double s = -static_cast<double>(nb.size()) * v[c];
      for (long k : nb) s += v[k];
      next[c] = -s / (h * h);  // -Δ
    }
    v = std::move(next);
  }
  double worst = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (domain.boundary_distance(g.node(c)) < 2.0 * m * h || !std::isfinite(v[c])) continue;
    worst = std::max(worst, std::abs(v[c] - f[c]));
  }
  return worst;
}

}  // namespace morreylab
