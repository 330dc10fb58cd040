#include "morreylab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace morreylab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kOversample = 8;

// Antiderivative of |t|^gamma with F(0) = 0 (gamma > -1), or ln|t| for gamma = -1.
double power_antiderivative(double t, double gamma) {
  if (gamma == -1.0) return std::copysign(std::log(std::abs(t)), t);
  return std::copysign(std::pow(std::abs(t), gamma + 1.0) / (gamma + 1.0), t);
}

// ∫_lo^hi |t - x0|^gamma dt, +inf when a non-integrable singularity is inside.
double power_integral_1d(double lo, double hi, double x0, double gamma) {
  const double a = lo - x0, b = hi - x0;
  if (gamma <= -1.0 && a <= 0.0 && b >= 0.0) return kInf;
  if (gamma <= -1.0) {
    // both endpoints on the same side; integrate |t|^gamma directly
    const double ua = std::abs(a), ub = std::abs(b);
    const double lo2 = std::min(ua, ub), hi2 = std::max(ua, ub);
    if (gamma == -1.0) return std::log(hi2 / lo2);
    return (std::pow(hi2, gamma + 1.0) - std::pow(lo2, gamma + 1.0)) / (gamma + 1.0);
  }
  return power_antiderivative(b, gamma) - power_antiderivative(a, gamma);
}

// w(B(x,r)) for |y - x0|^gamma in R^2, via polar coordinates about x0.
double power_ball_measure_2d(const Point& x, double r, const Point& x0, double gamma) {
  const double q = gamma + 2.0;
  const double D = distance(x, x0);
  if (D < r) {
    if (q <= 0.0) return kInf;
    // x0 inside: integrate rho_max(theta)^q / q over a full period (smooth, periodic)
    const int M = 4096;
    const double thc = std::atan2(x[1] - x0[1], x[0] - x0[0]);
    double s = 0.0;
    for (int k = 0; k < M; ++k) {
      const double th = 2.0 * std::numbers::pi * k / M;
      const double b = D * std::cos(th - thc);
      const double rho = b + std::sqrt(std::max(0.0, b * b - D * D + r * r));
      s += std::pow(rho, q);
    }
    return s / q * (2.0 * std::numbers::pi / M);
  }
  // x0 outside (or on the sphere): theta - thc = asin((r/D) sin phi)
  const double ratio = r / D;
  auto integrand = [&](double phi) {
    const double sp = std::sin(phi), cp = std::cos(phi);
    const double half = r * cp;  // sqrt(r^2 - D^2 sin^2(theta - thc))
    const double b = D * std::sqrt(std::max(0.0, 1.0 - ratio * ratio * sp * sp));
    const double r1 = std::max(0.0, b - half), r2 = b + half;
    const double jac = ratio * cp / std::sqrt(std::max(1e-300, 1.0 - ratio * ratio * sp * sp));
    double inner;
    if (q == 0.0)
      inner = std::log(r2 / r1);
    else
      inner = (std::pow(r2, q) - std::pow(r1, q)) / q;
    return inner * jac;
  };
  if (q <= 0.0 && D <= r) return kInf;
  return boost::math::quadrature::gauss<double, 64>::integrate(integrand, -std::numbers::pi / 2,
                                                               std::numbers::pi / 2);
}

}  // namespace

Weight Weight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw Error("constant weight must be positive");
  Weight w;
  w.scale_ = c;
  return w;
}

Weight Weight::power(Point center, double gamma, int dim) {
  if (dim != 1 && dim != 2) throw Error("weight dimension must be 1 or 2");
  if (!(gamma > -dim)) throw Error("power weight not locally integrable (gamma <= -n)");
  Weight w;
  w.dim_ = dim;
  if (dim == 1) center[1] = 0.0;
  if (gamma != 0.0) w.factors_.push_back({center, gamma});
  return w;
}

Weight Weight::product(const Weight& a, const Weight& b) {
  Weight w = a;
  w.scale_ *= b.scale_;
  w.dim_ = std::max(a.dim_, b.dim_);
  for (const Factor& f : b.factors_) {
    auto it = std::find_if(w.factors_.begin(), w.factors_.end(), [&](const Factor& g) { return g.center == f.center; });
    if (it != w.factors_.end())
      it->gamma += f.gamma;
    else
      w.factors_.push_back(f);
  }
  std::erase_if(w.factors_, [](const Factor& f) { return f.gamma == 0.0; });
  return w;
}

Weight::Kind Weight::kind() const {
  if (factors_.empty()) return Kind::Constant;
  return factors_.size() == 1 ? Kind::Power : Kind::Product;
}

double Weight::operator()(const Point& x) const {
  double v = scale_;
  for (const Factor& f : factors_) v *= std::pow(distance(x, f.center), f.gamma);
  return v;
}

Weight Weight::pow(double e) const {
  Weight w = *this;
  w.scale_ = std::pow(scale_, e);
  for (Factor& f : w.factors_) f.gamma *= e;
  std::erase_if(w.factors_, [](const Factor& f) { return f.gamma == 0.0; });
  return w;
}

Weight Weight::scaled(double c) const {
  if (!(c > 0.0)) throw Error("weight scale must be positive");
  Weight w = *this;
  w.scale_ *= c;
  return w;
}

bool Weight::locally_integrable(int dim) const {
  return std::all_of(factors_.begin(), factors_.end(), [&](const Factor& f) { return f.gamma > -dim; });
}

double Weight::cell_integral(const Point& c, double h, int dim) const {
  const double vol = dim == 1 ? h : h * h;
  if (factors_.empty()) return scale_ * vol;
  if (dim == 1 && factors_.size() == 1) {
    const Factor& f = factors_.front();
    const double v = power_integral_1d(c[0] - 0.5 * h, c[0] + 0.5 * h, f.center[0], f.gamma);
    if (std::isfinite(v)) return scale_ * v;
    return (*this)(c) * vol;
  }
  const bool touchesSingular = std::any_of(factors_.begin(), factors_.end(), [&](const Factor& f) {
    return f.gamma <= -dim && std::abs(f.center[0] - c[0]) <= 0.5 * h && std::abs(f.center[1] - c[1]) <= 0.5 * h;
  });
  if (touchesSingular) return (*this)(c) * vol;
  double s = 0.0;
  const double sub = h / kOversample;
  if (dim == 1) {
    for (int i = 0; i < kOversample; ++i) s += (*this)({c[0] - 0.5 * h + (i + 0.5) * sub, 0.0});
    return s * sub;
  }
  for (int j = 0; j < kOversample; ++j)
    for (int i = 0; i < kOversample; ++i)
      s += (*this)({c[0] - 0.5 * h + (i + 0.5) * sub, c[1] - 0.5 * h + (j + 0.5) * sub});
  return s * sub * sub;
}

double Weight::ball_measure(const Point& x, double r, int dim) const {
  if (factors_.empty()) return scale_ * (dim == 1 ? 2.0 * r : std::numbers::pi * r * r);
  if (factors_.size() == 1) {
    const Factor& f = factors_.front();
    if (dim == 1) return scale_ * power_integral_1d(x[0] - r, x[0] + r, f.center[0], f.gamma);
    return scale_ * power_ball_measure_2d(x, r, f.center, f.gamma);
  }
  if (!locally_integrable(dim)) {
    for (const Factor& f : factors_)
      if (f.gamma <= -dim && distance(f.center, x) < r) return kInf;
  }
  boost::math::quadrature::tanh_sinh<double> ts;
  if (dim == 1) {
    std::vector<double> cuts{x[0] - r, x[0] + r};
    for (const Factor& f : factors_)
      if (f.center[0] > x[0] - r && f.center[0] < x[0] + r) cuts.push_back(f.center[0]);
    std::sort(cuts.begin(), cuts.end());
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
      if (cuts[k + 1] > cuts[k])
        s += ts.integrate([&](double t) { return (*this)({t, 0.0}); }, cuts[k], cuts[k + 1]);
    return s;
  }
  // polar about x: angular trapezoid, radial tanh-sinh
  const int M = 256;
  double s = 0.0;
  for (int k = 0; k < M; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.5) / M;
    const double c = std::cos(th), sn = std::sin(th);
    s += ts.integrate([&](double rho) { return (*this)({x[0] + rho * c, x[1] + rho * sn}) * rho; }, 0.0, r);
  }
  return s * 2.0 * std::numbers::pi / M;
}

std::string Weight::describe() const {
  std::ostringstream os;
  if (factors_.empty()) {
    os << "const(" << scale_ << ")";
    return os.str();
  }
  if (scale_ != 1.0) os << scale_ << "*";
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    if (k) os << "*";
    os << "|x-(" << factors_[k].center[0];
    if (dim_ == 2) os << "," << factors_[k].center[1];
    os << ")|^" << factors_[k].gamma;
  }
  return os.str();
}

std::vector<double> cell_masses(const Weight& w, const Grid& grid) {
  std::vector<double> m(grid.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = w.cell_integral(grid.node(k), grid.spacing(), grid.dim());
  return m;
}

double weight_measure(const Weight& w, const Ball& region, const Grid& grid) {
  double s = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!region.contains(grid.node(k))) continue;
    s += w.cell_integral(grid.node(k), grid.spacing(), grid.dim());
    ++hits;
  }
  if (hits == 0) throw Error("empty region");
  return s;
}

std::vector<Ball> ap_sweep(const Grid& grid, const Weight& w, int centersPerAxis, int radiiCount) {
  std::vector<Ball> balls = ball_sweep(grid, centersPerAxis, radiiCount);
  const Domain& dom = grid.domain();
  const std::vector<double> radii = log_space(grid.spacing(), dom.diameter(), radiiCount);
  for (const Weight::Factor& f : w.factors()) {
    Point inward{};
    if (dom.dim() == 1) {
      inward = {f.center[0] <= dom.middle()[0] ? 1.0 : -1.0, 0.0};
    } else {
      const Point c = dom.center();
      const double len = distance(f.center, c);
      inward = len > 0 ? Point{(c[0] - f.center[0]) / len, (c[1] - f.center[1]) / len} : Point{1.0, 0.0};
    }
    for (double r : radii) {
      Ball centered{f.center, r};
      if (dom.contains_ball(centered)) {
        balls.push_back(centered);
        continue;
      }
      Ball touching{{f.center[0] + r * inward[0], f.center[1] + r * inward[1]}, r};
      if (dom.contains_ball(touching)) balls.push_back(touching);
    }
  }
  return balls;
}

ApEstimate ap_constant(const Weight& w, double p, std::shared_ptr<const Grid> grid, const std::vector<Ball>& sweep) {
  if (!(p >= 1.0)) throw Error("invalid exponent");
  const Grid& g = *grid;
  const Domain& dom = g.domain();
  std::vector<Ball> inside;
  for (const Ball& b : sweep)
    if (dom.contains_ball(b)) inside.push_back(b);
  if (inside.empty()) throw Error("empty region");
  SweepIndex index(grid, inside);

  const std::vector<double> wm = cell_masses(w, g);
  const std::vector<double> ws = index.sums(wm);
  const std::vector<std::size_t> cnt = index.counts();

  ApEstimate est;
  est.p = p;
  est.value = -kInf;
  std::vector<double> dualTerm;
  if (p == 1.0) {
    std::vector<double> inv(g.size());
    for (std::size_t k = 0; k < inv.size(); ++k) inv[k] = 1.0 / w(g.node(k));
    dualTerm = index.maxima(inv);
  } else {
    const Weight dual = w.pow(-1.0 / (p - 1.0));
    est.regularized = !dual.locally_integrable(g.dim());
    dualTerm = index.sums(cell_masses(dual, g));
  }
  for (std::size_t b = 0; b < inside.size(); ++b) {
    if (cnt[b] == 0) continue;
    ++est.ballsUsed;
    const double vol = cnt[b] * g.cell_measure();
    const double avgW = ws[b] / vol;
    const double val = p == 1.0 ? avgW * dualTerm[b] : avgW * std::pow(dualTerm[b] / vol, p - 1.0);
    if (val > est.value) {
      est.value = val;
      est.attainingBall = inside[b];
    }
  }
  if (est.ballsUsed == 0) throw Error("empty region");
  // both averages are exact for a constant weight; keep the product free of summation rounding
  if (w.kind() == Weight::Kind::Constant) est.value = 1.0;
  return est;
}

ApMembership ap_membership(const Weight& w, double p, std::shared_ptr<const Grid> grid,
                           const std::vector<Ball>& sweep) {
  if (!(p >= 1.0)) throw Error("invalid exponent");
  if (w.kind() == Weight::Kind::Product) throw Error("analytic classification unavailable; use ap_constant");
  const int n = grid->dim();
  ApMembership m;
  m.gammaLower = -n;
  m.gammaUpper = n * (p - 1.0);
  const double gamma = w.factors().empty() ? 0.0 : w.factors().front().gamma;
  m.member = p == 1.0 ? (gamma > -n && gamma <= 0.0) : (gamma > -n && gamma < n * (p - 1.0));
  m.estimate = ap_constant(w, p, std::move(grid), sweep);
  return m;
}

}  // namespace morreylab
