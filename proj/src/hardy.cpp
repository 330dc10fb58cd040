#include "morreylab/hardy.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "morreylab/grid.hpp"

namespace morreylab {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// Products under the conventions 0·∞ = 0.
double safe_mul(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

std::vector<double> merged(std::vector<double> a, const std::vector<double>& b, double lo, double hi) {
  a.insert(a.end(), b.begin(), b.end());
  std::erase_if(a, [&](double t) { return !(t >= lo && t <= hi); });
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace

MonotoneFunction::MonotoneFunction(std::vector<double> xs, std::vector<double> ys) : xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.empty()) throw Error("monotone table is malformed");
  for (std::size_t k = 1; k < xs_.size(); ++k) {
    if (xs_[k] < xs_[k - 1]) throw Error("monotone table abscissae must not decrease");
    if (ys_[k] < ys_[k - 1]) throw Error("monotonicity violated");
  }
  for (double y : ys_)
    if (!std::isfinite(y)) throw Error("monotone table values must be finite");
}

MonotoneFunction MonotoneFunction::constant(double c, double d) { return MonotoneFunction({0.0, d}, {c, c}); }

MonotoneFunction MonotoneFunction::tabulate(const RealFunction& fn, double d, int points) {
  if (points < 2) throw Error("tabulation needs at least two points");
  std::vector<double> xs(points), ys(points);
  for (int k = 0; k < points; ++k) {
    xs[k] = d * k / (points - 1);
    ys[k] = fn(xs[k]);
  }
  return MonotoneFunction(std::move(xs), std::move(ys));
}

MonotoneFunction MonotoneFunction::step(double a, double d, double height) {
  return MonotoneFunction({0.0, a, a, d}, {0.0, 0.0, height, height});
}

double MonotoneFunction::operator()(double t) const {
  if (t <= xs_.front()) return ys_.front();
  if (t >= xs_.back()) return ys_.back();
  // last k with xs_[k] <= t: right-continuous at jumps
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - xs_.begin());
  const double x0 = xs_[k - 1], x1 = xs_[k];
  if (x1 == x0) return ys_[k];
  return ys_[k - 1] + (ys_[k] - ys_[k - 1]) * (t - x0) / (x1 - x0);
}

std::vector<double> MonotoneFunction::breakpoints() const {
  std::vector<double> b = xs_;
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

bool MonotoneFunction::is_zero() const {
  return std::all_of(ys_.begin(), ys_.end(), [](double y) { return y == 0.0; });
}

double hardy_apply(const MonotoneFunction& g, const HardySetting& s, double r) {
  if (!(r > 0.0 && r < s.d)) throw Error("hardy_apply needs 0 < r < d");
  const std::vector<double> cuts = merged({r, s.d}, g.breakpoints(), r, s.d);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
    total += GK::integrate([&](double t) { return safe_mul(g(t), s.w(t)); }, cuts[k], cuts[k + 1], 10, 1e-13);
  return total;
}

std::vector<double> hardy_radius_grid(double d, const HardyOptions& o) {
  std::vector<double> r = log_space(o.innerFraction * d, 0.5 * d, o.radii);
  for (double off : log_space(o.innerFraction * d, 0.5 * d, o.radii)) r.push_back(d - off);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

namespace {

HardyConstant best_constant_pass(const HardySetting& s, const HardyOptions& o, int essPoints) {
  const double d = s.d;
  auto V1 = [&](double t) {
    double m = 0.0;
    const double lt = std::log(t), ld = std::log(d);
    for (int k = 0; k < essPoints; ++k) m = std::max(m, s.v1(std::exp(lt + (ld - lt) * k / (essPoints - 1))));
    return m;
  };
  bool unbounded = false;
  auto integrand = [&](double t) {
    const double wt = s.w(t);
    if (wt == 0.0) return 0.0;
    const double v = V1(t);
    if (std::isinf(v)) return 0.0;  // 1/∞ = 0
    if (v == 0.0) {
      unbounded = true;
      return 0.0;
    }
    return wt / v;
  };
  std::vector<double> r = hardy_radius_grid(d, o);
  r.push_back(d);
  std::vector<double> seg(r.size(), 0.0);
  for (std::size_t k = 0; k + 1 < r.size(); ++k) seg[k] = GK::integrate(integrand, r[k], r[k + 1], 0);
  HardyConstant out;
  double tail = 0.0;
  for (std::size_t k = r.size() - 1; k-- > 0;) {
    tail += seg[k];
    const double val = safe_mul(s.v2(r[k]), tail);
    if (val >= out.value) {
      out.value = val;
      out.attainingRadius = r[k];
    }
  }
  if (unbounded) {
    out.unbounded = true;
    out.value = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace

HardyConstant hardy_best_constant(const HardySetting& s, const HardyOptions& o) {
  if (!(s.d > 0.0)) throw Error("hardy setting needs d > 0");
  HardyConstant out = best_constant_pass(s, o, o.essSupPoints);
  out.valueDoubledGrid = best_constant_pass(s, o, 2 * o.essSupPoints).value;
  if (!out.unbounded)
    out.gridSensitive = std::abs(out.valueDoubledGrid - out.value) > 0.01 * std::max(out.value, 1e-300);
  return out;
}

HardyReport hardy_verify_inequality(const HardySetting& s, const std::vector<MonotoneFunction>& family,
                                    const std::vector<std::string>& ids, const HardyOptions& o) {
  HardyReport rep;
  const HardyConstant B = hardy_best_constant(s, o);
  if (B.unbounded) throw Error("unbounded");
  rep.bestConstant = B.value;
  const std::vector<double> grid = hardy_radius_grid(s.d, o);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const MonotoneFunction& g = family[i];
    HardyRow row;
    row.id = i < ids.size() ? ids[i] : "g" + std::to_string(i);
    // H*_w g on the grid by suffix sums over grid and breakpoints
    std::vector<double> cuts = merged(grid, g.breakpoints(), grid.front(), s.d);
    cuts.push_back(s.d);
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> seg(cuts.size(), 0.0);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      seg[k] = GK::integrate([&](double t) { return safe_mul(g(t), s.w(t)); }, cuts[k], cuts[k + 1], 0);
    double tail = 0.0;
    for (std::size_t k = cuts.size() - 1; k-- > 0;) {
      tail += seg[k];
      row.lhs = std::max(row.lhs, safe_mul(s.v2(cuts[k]), tail));
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      row.rhs = std::max(row.rhs, safe_mul(s.v1(grid[k]), g(grid[k])));
      if (k + 1 < grid.size()) {
        const double mid = 0.5 * (grid[k] + grid[k + 1]);
        row.rhs = std::max(row.rhs, safe_mul(s.v1(mid), g(mid)));
      }
    }
    row.ratio = row.rhs > 0.0 ? row.lhs / row.rhs : 0.0;
    row.holds = row.lhs <= rep.bestConstant * row.rhs * (1.0 + 1e-6) + 1e-300;
    if (row.lhs == 0.0) row.holds = true;
    rep.allHold = rep.allHold && row.holds;
    rep.maxRatio = std::max(rep.maxRatio, row.ratio);
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<MonotoneFunction> hardy_default_family(double d, std::vector<std::string>* ids) {
  std::vector<MonotoneFunction> fam;
  for (double a : log_space(1e-6 * d, 0.9 * d, 25)) {
    fam.push_back(MonotoneFunction::step(a, d));
    if (ids) ids->push_back("step_a=" + std::to_string(a));
  }
  for (int k = 0; k < 25; ++k) {
    const double q = 0.1 + 2.9 * k / 24.0;
    fam.push_back(MonotoneFunction::tabulate([q](double t) { return std::pow(t, q); }, d, 401));
    if (ids) ids->push_back("power_q=" + std::to_string(q));
  }
  return fam;
}

}  // namespace morreylab
