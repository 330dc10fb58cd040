#include "morreylab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "morreylab/lattice.hpp"

namespace morreylab {

namespace {

// Lattice distances that tie with a radius are decided the same way by the
// pointwise and the FFT paths: a point is inside B(x,t) iff |y-x| < t(1-kTie).
constexpr double kTie = 1e-12;

double inner(double t) { return t * (1.0 - kTie); }

}  // namespace

CZKernel::CZKernel(int n, int m, MultiIndex alpha) : gamma_(n, m), alpha_(alpha) {
  if (order(alpha) != 2 * m) throw Error("CZ kernel needs |alpha| = 2m");
  if (n == 1 && alpha[1] != 0) throw Error("CZ kernel multi-index has a second component in 1D");
  if (n == 1) return;
  const int points = 512;
  double sum = 0.0;
  for (int k = 0; k < points; ++k) {
    const double th = 2.0 * std::numbers::pi * k / points;
    const double v = (*this)({std::cos(th), std::sin(th)});
    sum += v;
    bound_ = std::max(bound_, std::abs(v));
  }
  mean_ = sum / points;
  if (std::abs(mean_) > 1e-8 * std::max(1.0, bound_)) throw Error("kernel lacks cancellation");
}

double CZKernel::operator()(const Point& z) const {
  if (gamma_.n() == 1) return 0.0;
  return gamma_.derivative(z, alpha_);
}

std::vector<double> operator_radii(const Grid& grid, int count) {
  return log_space(grid.spacing(), grid.domain().diameter(), count);
}

std::size_t lattice_count(const Grid& grid, const Point& x, double t) {
  const double h = grid.spacing();
  const double tt = inner(t);
  const Point o = grid.lattice_point(0, 0);
  const int i0 = static_cast<int>(std::floor((x[0] - tt - o[0]) / h)) - 1;
  const int i1 = static_cast<int>(std::ceil((x[0] + tt - o[0]) / h)) + 1;
  std::size_t n = 0;
  if (grid.dim() == 1) {
    for (int i = i0; i <= i1; ++i)
      if (distance(grid.lattice_point(i, 0), x) < tt) ++n;
    return n;
  }
  const int j0 = static_cast<int>(std::floor((x[1] - tt - o[1]) / h)) - 1;
  const int j1 = static_cast<int>(std::ceil((x[1] + tt - o[1]) / h)) + 1;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (distance(grid.lattice_point(i, j), x) < tt) ++n;
  return n;
}

double maximal(const SampledField& f, const Point& x, const std::vector<double>& radii) {
  const Grid& g = f.grid();
  double best = 0.0;
  for (double t : radii) {
    const double tt = inner(t);
    double s = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c)
      if (distance(g.node(c), x) < tt) s += std::abs(f[c]);
    const std::size_t n = lattice_count(g, x, t);
    if (n > 0) best = std::max(best, s / static_cast<double>(n));
  }
  return best;
}

namespace {

void check_eps(const Grid& g, double eps) {
  if (eps < g.spacing() * (1.0 - kTie)) throw Error("truncation below resolution");
}

}  // namespace

double truncated_singular(const SampledField& f, const CZKernel& k, const Point& x, double eps) {
  const Grid& g = f.grid();
  check_eps(g, eps);
  if (k.vanishes()) return 0.0;
  const double tt = inner(eps);
  double s = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Point& y = g.node(c);
    if (distance(y, x) < tt || f[c] == 0.0) continue;
    s += k({x[0] - y[0], x[1] - y[1]}) * f[c];
  }
  return s * g.cell_measure();
}

double maximal_singular(const SampledField& f, const CZKernel& k, const Point& x, const std::vector<double>& eps) {
  double best = 0.0;
  for (double e : eps) best = std::max(best, std::abs(truncated_singular(f, k, x, e)));
  return best;
}

namespace {

// Integer lattice offsets with |o| h < t(1 - kTie), counted over the whole
// lattice.
std::size_t offset_count(int dim, double h, double t) {
  const double tt = inner(t);
  const int K = static_cast<int>(std::ceil(tt / h)) + 1;
  std::size_t n = 0;
  if (dim == 1) {
    for (int i = -K; i <= K; ++i)
      if (std::abs(i) * h < tt) ++n;
    return n;
  }
  for (int j = -K; j <= K; ++j)
    for (int i = -K; i <= K; ++i)
      if (std::hypot(i * h, j * h) < tt) ++n;
  return n;
}

std::vector<double> sorted_radii(std::vector<double> r) {
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

const std::shared_ptr<const Grid>& common_grid(const std::vector<SampledField>& fs) {
  if (fs.empty()) throw Error("no fields");
  for (const SampledField& f : fs)
    if (f.grid_ptr() != fs.front().grid_ptr() && f.size() != fs.front().size())
      throw Error("fields live on different grids");
  return fs.front().grid_ptr();
}

}  // namespace

std::vector<SampledField> maximal_fields(const std::vector<SampledField>& fs, const std::vector<double>& radii) {
  const auto& grid = common_grid(fs);
  const int dim = grid->dim();
  const double h = grid->spacing();
  LatticeConvolver conv(grid);
  std::vector<LatticeConvolver::Spectrum> spectra;
  for (const SampledField& f : fs) {
    const SampledField a = f.abs();
    spectra.push_back(conv.transform_field(a.values()));
  }
  std::vector<std::vector<double>> best(fs.size(), std::vector<double>(grid->size(), 0.0));
  for (double t : sorted_radii(radii)) {
    const std::size_t n = offset_count(dim, h, t);
    if (n == 0) continue;
    const double tt = inner(t);
    const auto ker = conv.transform_kernel([&](int di, int dj) { return std::hypot(di * h, dj * h) < tt ? 1.0 : 0.0; });
    for (std::size_t q = 0; q < fs.size(); ++q) {
      const std::vector<double> s = conv.apply(spectra[q], ker);
      for (std::size_t c = 0; c < s.size(); ++c) best[q][c] = std::max(best[q][c], s[c] / static_cast<double>(n));
    }
  }
  std::vector<SampledField> out;
  for (auto& b : best) out.emplace_back(grid, std::move(b));
  return out;
}

SampledField maximal_field(const SampledField& f, const std::vector<double>& radii) {
  return maximal_fields({f}, radii).front();
}

std::vector<SampledField> maximal_singular_fields(const std::vector<SampledField>& fs, const CZKernel& k,
                                                  const std::vector<double>& epsIn) {
  const auto& grid = common_grid(fs);
  const std::vector<double> eps = sorted_radii(epsIn);
  if (eps.empty()) throw Error("empty truncation grid");
  check_eps(*grid, eps.front());
  std::vector<SampledField> out;
  if (k.vanishes()) {
    for (std::size_t q = 0; q < fs.size(); ++q) out.emplace_back(grid);
    return out;
  }
  const double h = grid->spacing();
  const double A = grid->cell_measure();
  LatticeConvolver conv(grid);
  std::vector<LatticeConvolver::Spectrum> spectra;
  for (const SampledField& f : fs) spectra.push_back(conv.transform_field(f.values()));
  std::vector<std::vector<double>> run(fs.size(), std::vector<double>(grid->size(), 0.0));
  std::vector<std::vector<double>> best = run;
  // shells [eps_i, eps_{i+1}) from the outside in; the outermost is unbounded
  for (std::size_t i = eps.size(); i-- > 0;) {
    const double lo = inner(eps[i]);
    const double hi = i + 1 < eps.size() ? inner(eps[i + 1]) : std::numeric_limits<double>::infinity();
    const auto ker = conv.transform_kernel([&](int di, int dj) {
      const double r = std::hypot(di * h, dj * h);
      return (r >= lo && r < hi) ? k({di * h, dj * h}) * A : 0.0;
    });
    for (std::size_t q = 0; q < fs.size(); ++q) {
      const std::vector<double> s = conv.apply(spectra[q], ker);
      for (std::size_t c = 0; c < s.size(); ++c) {
        run[q][c] += s[c];
        best[q][c] = std::max(best[q][c], std::abs(run[q][c]));
      }
    }
  }
  for (auto& b : best) out.emplace_back(grid, std::move(b));
  return out;
}

SampledField maximal_singular_field(const SampledField& f, const CZKernel& k, const std::vector<double>& eps) {
  return maximal_singular_fields({f}, k, eps).front();
}

SampledField truncated_singular_field(const SampledField& f, const CZKernel& k, double eps) {
  const auto& grid = f.grid_ptr();
  check_eps(*grid, eps);
  if (k.vanishes()) return SampledField(grid);
  const double h = grid->spacing();
  const double A = grid->cell_measure();
  const double lo = inner(eps);
  LatticeConvolver conv(grid);
  return SampledField(grid, conv.convolve(f.values(), [&](int di, int dj) {
    return std::hypot(di * h, dj * h) >= lo ? k({di * h, dj * h}) * A : 0.0;
  }));
}

SampledField newtonian_gradient(const SampledField& f, int axis) {
  const auto& grid = f.grid_ptr();
  if (grid->dim() != 2) throw Error("Newtonian potential needs n = 2");
  const double scale = -grid->spacing() / (2.0 * std::numbers::pi);
  LatticeConvolver conv(grid);
  return SampledField(grid, conv.convolve(f.values(), [&](int di, int dj) {
    return scale * cell_grad_log_integral(di, dj, axis);
  }));
}

namespace {

double newtonian_gradient_at(const SampledField& f, const Point& x, int axis) {
  const Grid& g = f.grid();
  const double h = g.spacing();
  double s = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (f[c] == 0.0) continue;
    const Point& y = g.node(c);
    s += f[c] * cell_grad_log_integral((x[0] - y[0]) / h, (x[1] - y[1]) / h, axis);
  }
  return -h / (2.0 * std::numbers::pi) * s;
}

}  // namespace

IdentityReport singular_identity_check(const SampledField& f, MultiIndex alpha, MultiIndex beta,
                                       std::optional<Point> at) {
  const Grid& g = f.grid();
  if (g.dim() != 2) throw Error("identity check needs n = 2");
  if (order(alpha) != 2 || order(beta) != 1 || alpha[0] < beta[0] || alpha[1] < beta[1])
    throw Error("identity check needs |alpha| = 2, |beta| = 1, beta < alpha");
  const CZKernel k(2, 1, alpha);
  const int bAxis = beta[0] == 1 ? 0 : 1;
  const int dAxis = alpha[0] - beta[0] == 1 ? 0 : 1;
  const double h = g.spacing();

  IdentityReport rep;
  rep.aClassical = alpha[0] == 1 ? 0.0 : -0.5;
  rep.x = at.value_or(g.domain().middle());
  {
    Point xp = rep.x, xm = rep.x;
    xp[dAxis] += h;
    xm[dAxis] -= h;
    rep.lhs = (newtonian_gradient_at(f, xp, bAxis) - newtonian_gradient_at(f, xm, bAxis)) / (2.0 * h);
    rep.kf = truncated_singular(f, k, rep.x, h);
    const long c = g.locate(rep.x);
    rep.f = c >= 0 ? f[static_cast<std::size_t>(c)] : 0.0;
    rep.aEstimate = rep.f != 0.0 ? (rep.lhs - rep.kf) / rep.f : std::numeric_limits<double>::quiet_NaN();
  }

  const SampledField g1 = newtonian_gradient(f, 0);
  const SampledField g2 = newtonian_gradient(f, 1);
  const SampledField& gb = bAxis == 0 ? g1 : g2;
  const SampledField kf = truncated_singular_field(f, k, h);
  const double scale = std::max(f.max_abs(), 1e-300);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Cell& cell = g.cell(c);
    const long e = g.index_of(cell.i + 1, cell.j), w = g.index_of(cell.i - 1, cell.j);
    const long n = g.index_of(cell.i, cell.j + 1), s = g.index_of(cell.i, cell.j - 1);
    if (e < 0 || w < 0 || n < 0 || s < 0 || g.domain().boundary_distance(cell.center) < 2.0 * h) {
      ++rep.skippedNodes;
      continue;
    }
    ++rep.interiorNodes;
    auto d = [&](const SampledField& v, int axis) {
      return axis == 0 ? (v[e] - v[w]) / (2.0 * h) : (v[n] - v[s]) / (2.0 * h);
    };
    const double lhs = d(gb, dAxis);
    rep.maxDiscrepancy = std::max(rep.maxDiscrepancy, std::abs(lhs - kf[c] - rep.aClassical * f[c]) / scale);
    rep.traceError = std::max(rep.traceError, std::abs(d(g1, 0) + d(g2, 1) + f[c]) / scale);
  }
  return rep;
}

}  // namespace morreylab
