#include "morreylab/greens.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <span>

namespace morreylab {

namespace {

constexpr double kPi = std::numbers::pi;
// Pairs only avoid the diagonal by the grid scale; boundary approach is
// limited by this fraction of the diameter, independent of the grid.
constexpr double kBoundaryFloor = 1e-6;

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

KernelJet var(double v, int axis) { return KernelJet::variable(v, axis); }
KernelJet cst(double v) { return KernelJet::constant(v); }

}  // namespace

FundamentalSolution::FundamentalSolution(int n, int m) : n_(n), m_(m) {
  if (n != 1 && n != 2) throw Error("fundamental solution needs n in {1, 2}");
  if (m < 1 || m > 2) throw Error("fundamental solution needs m in {1, 2}");
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  if (n == 1) {
    c_ = sign / (2.0 * factorial(2 * m - 1));
    log_ = false;
  } else {
    c_ = sign / (2.0 * kPi * std::pow(4.0, m - 1) * factorial(m - 1) * factorial(m - 1));
    log_ = true;
  }
}

KernelJet FundamentalSolution::jet(const Point& z) const {
  if (n_ == 1) {
    if (z[0] == 0.0) throw Error("on-diagonal");
    KernelJet a = abs(var(z[0], 0));
    KernelJet p = a;
    for (int k = 1; k < 2 * m_ - 1; ++k) p = p * a;
    return p * c_;
  }
  if (z[0] == 0.0 && z[1] == 0.0) throw Error("on-diagonal");
  const KernelJet z1 = var(z[0], 0), z2 = var(z[1], 1);
  const KernelJet s = z1 * z1 + z2 * z2;
  KernelJet out = log(s) * (0.5 * c_);
  for (int k = 1; k < m_; ++k) out = out * s;
  return out;
}

double FundamentalSolution::operator()(const Point& z) const {
  const double r = norm(z);
  if (r == 0.0) {
    if (n_ == 2 && m_ == 1) throw Error("on-diagonal");
    return 0.0;
  }
  if (n_ == 1) return c_ * std::pow(r, 2 * m_ - 1);
  return c_ * std::pow(r, 2 * m_ - 2) * std::log(r);
}

double FundamentalSolution::derivative(const Point& z, const MultiIndex& a) const {
  if (n_ == 1 && a[1] != 0) return 0.0;
  return jet(z).derivative(a[0], a[1]);
}

GreenFunction::GreenFunction(const Domain& domain, int m)
    : domain_(domain), m_(m), gamma_(domain.dim(), std::clamp(m, 1, 2)) {
  if (m < 1 || m > 2) throw Error("no Green function");
}

KernelJet GreenFunction::interval_jet(const Point& x, const Point& y) const {
  const double a = domain_.a(), L = domain_.b() - domain_.a();
  const KernelJet s = (var(x[0], 0) - a) * (1.0 / L);
  const double t = (y[0] - a) / L;
  const bool left = x[0] <= y[0];
  if (m_ == 1) return (left ? s * (1.0 - t) : (1.0 - s) * t) * L;
  KernelJet g;
  if (left) {
    g = s * s * ((1 - t) * (1 - t)) * (3 * t - s - 2 * t * s);
  } else {
    const KernelJet u = 1.0 - s;
    g = (u * u) * (t * t) * (3 * s - t - 2 * t * s);
  }
  return g * (L * L * L / 6.0);
}

KernelJet GreenFunction::disk_regular_jet(const Point& x, const Point& y) const {
  const Point c = domain_.center();
  const double R = domain_.radius();
  const KernelJet X1 = var(x[0] - c[0], 0), X2 = var(x[1] - c[1], 1);
  const double Y1 = y[0] - c[0], Y2 = y[1] - c[1];
  const double yy = Y1 * Y1 + Y2 * Y2;
  const KernelJet xx = X1 * X1 + X2 * X2;
  const KernelJet xy = X1 * Y1 + X2 * Y2;
  if (m_ == 1) {
    const KernelJet A = xx * (yy / (R * R)) - 2.0 * xy + R * R;
    return log(A) * (1.0 / (4 * kPi));
  }
  // Boggio on the unit disk, rescaled
  const double R2 = R * R;
  const KernelJet A2 = xx * (yy / (R2 * R2)) - xy * (2.0 / R2) + 1.0;
  const KernelJet D1 = X1 - Y1, D2 = X2 - Y2;
  const KernelJet rr = D1 * D1 + D2 * D2;
  const KernelJet h1 = ((A2 - rr * (1.0 / R2)) * 0.5 - rr * (1.0 / R2) * log(A2) * 0.5) * (1.0 / (8 * kPi));
  return h1 * R2 - rr * (std::log(R) / (8 * kPi));
}

KernelJet GreenFunction::jet(const Point& x, const Point& y) const {
  if (x == y) throw Error("on-diagonal");
  if (domain_.kind() == Domain::Kind::Interval) return interval_jet(x, y);
  return gamma_.jet({x[0] - y[0], x[1] - y[1]}) + disk_regular_jet(x, y);
}

double GreenFunction::operator()(const Point& x, const Point& y) const { return jet(x, y).value(); }

double GreenFunction::derivative(const Point& x, const Point& y, const MultiIndex& a) const {
  if (dim() == 1 && a[1] != 0) return 0.0;
  return jet(x, y).derivative(a[0], a[1]);
}

KernelJet GreenFunction::regular_jet(const Point& x, const Point& y) const {
  if (domain_.kind() == Domain::Kind::Disk) return disk_regular_jet(x, y);
  // h is a polynomial; take G and |z| from the same side of the diagonal
  const KernelJet z = var(x[0] - y[0], 0);
  const KernelJet a = x[0] <= y[0] ? z * -1.0 : z;
  KernelJet p = a;
  for (int k = 1; k < 2 * m_ - 1; ++k) p = p * a;
  return interval_jet(x, y) - p * gamma_.constant();
}

double GreenFunction::regular(const Point& x, const Point& y) const { return regular_jet(x, y).value(); }

PoissonKernel::PoissonKernel(const Domain& domain, int m, int j) : domain_(domain) {
  if (domain.kind() != Domain::Kind::Disk || m != 1 || j != 0)
    throw Error("Poisson kernel implemented for the disk with m = 1, j = 0 only");
}

double PoissonKernel::operator()(const Point& x, const Point& q) const {
  const Point c = domain_.center();
  const double R = domain_.radius();
  const double dx = distance(x, c), dq = distance(x, q);
  return (R * R - dx * dx) / (2 * kPi * R * dq * dq);
}

double PoissonKernel::boundary_integral(const Point& x, int points) const {
  const Point c = domain_.center();
  const double R = domain_.radius();
  double s = 0.0;
  for (int k = 0; k < points; ++k) {
    const double th = 2 * kPi * k / points;
    s += (*this)(x, {c[0] + R * std::cos(th), c[1] + R * std::sin(th)});
  }
  return s * 2 * kPi * R / points;
}

namespace {

double radical_inverse(std::uint64_t k, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

std::vector<KernelPair> sample_kernel_pairs(const Domain& domain, std::size_t count, double minSeparation,
                                            std::uint64_t seed) {
  if (!(minSeparation > 0.0)) throw Error("pair separation must be positive");
  // Halton points (bases 2, 3, 5, 7) with a seeded Cranley-Patterson shift:
  // the low-discrepancy design keeps the sample sup stable under resizing
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::array<double, 4> shift{U(rng), U(rng), U(rng), U(rng)};
  auto coord = [&](std::uint64_t k, int axis) {
    static constexpr unsigned bases[4] = {2, 3, 5, 7};
    return std::fmod(radical_inverse(k, bases[axis]) + shift[axis], 1.0);
  };
  const double d = domain.diameter();
  const double dMax = domain.kind() == Domain::Kind::Interval ? d / 2 : domain.radius();
  auto logu = [](double u, double lo, double hi) { return lo >= hi ? lo : std::exp(std::log(lo) + u * std::log(hi / lo)); };

  std::vector<KernelPair> pairs;
  pairs.reserve(count);
  for (std::uint64_t k = 1; pairs.size() < count; ++k) {
    const bool near = k % 2 == 0;
    const std::uint64_t q = (k + 1) / 2;
    const double u0 = coord(q, 0), u1 = coord(q, 1), u2 = coord(q, 2), u3 = coord(q, 3);
    const double dx = logu(u0, near ? minSeparation : kBoundaryFloor * d, dMax);
    const double rho = logu(u1, minSeparation, near ? std::max(dx, minSeparation) : d);
    Point x{}, y{};
    if (domain.kind() == Domain::Kind::Interval) {
      const bool leftEnd = u3 < 0.5;
      x = {leftEnd ? domain.a() + dx : domain.b() - dx, 0.0};
      y = {x[0] + (u2 < 0.5 ? -rho : rho), 0.0};
    } else {
      const double th = 2 * std::numbers::pi * u3;
      const double r = domain.radius() - dx;
      x = {domain.center()[0] + r * std::cos(th), domain.center()[1] + r * std::sin(th)};
      const double phi = th + 2 * std::numbers::pi * u2;
      y = {x[0] + rho * std::cos(phi), x[1] + rho * std::sin(phi)};
    }
    if (domain.boundary_distance(y) < kBoundaryFloor * d) continue;
    if (domain.boundary_distance(x) < kBoundaryFloor * d) continue;
    pairs.push_back({x, y});
  }
  return pairs;
}

std::string regime_name(BoundRegime r) {
  switch (r) {
    case BoundRegime::Bounded: return "bounded";
    case BoundRegime::Logarithmic: return "logarithmic";
    case BoundRegime::Power: return "power";
    case BoundRegime::TopOrder: return "top_order_dy";
    case BoundRegime::TopOrderDx: return "top_order_dx";
    case BoundRegime::RegularPart: return "regular_part";
  }
  return "?";
}

std::vector<BoundRegime> applicable_regimes(int n, int m, int k) {
  std::vector<BoundRegime> out;
  const int crit = 2 * m - n;
  if (k < crit) out.push_back(BoundRegime::Bounded);
  if (k == crit) out.push_back(BoundRegime::Logarithmic);
  if (k > crit && k <= 2 * m) out.push_back(BoundRegime::Power);
  if (k == 2 * m) {
    out.push_back(BoundRegime::TopOrder);
    out.push_back(BoundRegime::TopOrderDx);
  }
  if (k > crit + 1 && k <= 2 * m) out.push_back(BoundRegime::RegularPart);
  return out;
}

namespace {

struct RegimeEvaluator {
  const GreenFunction& g;
  double d;

  // Ratio |LHS| / shape for one pair, or -1 when the pair is outside the regime.
  double operator()(const RegimeFit& f, const KernelPair& p) const {
    const int n = g.dim(), m = g.m(), k = order(f.alpha);
    const Domain& dom = g.domain();
    const double rho = distance(p.x, p.y);
    const double dxx = dom.boundary_distance(p.x), dyy = dom.boundary_distance(p.y);
    if (f.regime == BoundRegime::RegularPart) {
      if (rho > dxx) return -1.0;
      return std::abs(g.regular_jet(p.x, p.y).derivative(f.alpha[0], f.alpha[1])) / std::pow(dxx, 2 * m - n - k);
    }
    const double lhs = std::abs(g.jet(p.x, p.y).derivative(f.alpha[0], f.alpha[1]));
    double shape = 1.0;
    switch (f.regime) {
      case BoundRegime::Bounded: shape = 1.0; break;
      case BoundRegime::Logarithmic: shape = std::log(2 * d / rho); break;
      case BoundRegime::Power: shape = std::pow(rho, 2 * m - n - k); break;
      case BoundRegime::TopOrder: shape = std::pow(rho, -n) * std::pow(std::min(1.0, dyy / rho), m); break;
      case BoundRegime::TopOrderDx: shape = std::pow(rho, -n) * std::pow(std::min(1.0, dxx / rho), m); break;
      default: break;
    }
    return lhs / shape;
  }
};

// Compass search in (log d(x), angle of x, log |x-y|, direction of y-x),
// keeping |x-y| >= sep and both points off the boundary. In 1D the side of x
// and the direction of y are kept from the start pair.
void refine_fit(RegimeFit& f, const KernelPair& start, double startVal, const RegimeEvaluator& eval, double sep) {
  const Domain& dom = eval.g.domain();
  const bool disk = dom.kind() == Domain::Kind::Disk;
  const double floor = kBoundaryFloor * dom.diameter();
  const Point c = dom.middle();
  const bool leftSide = start.x[0] < c[0];
  const double ySign = start.y[0] >= start.x[0] ? 1.0 : -1.0;

  std::array<double, 4> q{std::log(dom.boundary_distance(start.x)), std::atan2(start.x[1] - c[1], start.x[0] - c[0]),
                          std::log(distance(start.x, start.y)),
                          std::atan2(start.y[1] - start.x[1], start.y[0] - start.x[0])};
  auto build = [&](const std::array<double, 4>& v) {
    const double dx = std::exp(v[0]), rho = std::exp(v[2]);
    KernelPair p;
    if (disk) {
      const double r = dom.radius() - dx;
      p.x = {c[0] + r * std::cos(v[1]), c[1] + r * std::sin(v[1])};
      p.y = {p.x[0] + rho * std::cos(v[3]), p.x[1] + rho * std::sin(v[3])};
    } else {
      p.x = {leftSide ? dom.a() + dx : dom.b() - dx, 0.0};
      p.y = {p.x[0] + ySign * rho, 0.0};
    }
    return p;
  };
  auto feasible = [&](const KernelPair& p) {
    return distance(p.x, p.y) >= sep * (1 - 1e-12) && dom.boundary_distance(p.x) >= floor &&
           dom.boundary_distance(p.y) >= floor;
  };
  const std::array<int, 4> axes2d{0, 1, 2, 3};
  const std::array<int, 2> axes1d{0, 2};
  const std::span<const int> axes = disk ? std::span<const int>(axes2d) : std::span<const int>(axes1d);

  double bestVal = startVal;
  KernelPair best = start;
  double step = 0.5;
  for (int iter = 0; iter < 4000 && step > 1e-4; ++iter) {
    bool improved = false;
    for (int a : axes)
      for (double sgn : {1.0, -1.0}) {
        std::array<double, 4> v = q;
        v[a] += sgn * step;
        const KernelPair p = build(v);
        if (!feasible(p)) continue;
        const double val = eval(f, p);
        if (val > bestVal) {
          bestVal = val;
          best = p;
          q = v;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
  if (bestVal > f.constant) {
    f.constant = bestVal;
    f.attaining = best;
  }
}

}  // namespace

std::vector<RegimeFit> verify_kernel_bounds(const GreenFunction& g, const std::vector<KernelPair>& pairs,
                                            const std::vector<MultiIndex>& alphas, double refineSeparation) {
  const int n = g.dim(), m = g.m();
  std::vector<RegimeFit> fits;
  for (const MultiIndex& a : alphas) {
    const auto regimes = applicable_regimes(n, m, order(a));
    if (regimes.empty()) throw Error("regime not applicable");
    for (BoundRegime r : regimes) fits.push_back({r, a, 0.0, 0, {}});
  }
  const RegimeEvaluator eval{g, g.domain().diameter()};
  constexpr std::size_t kStarts = 16;
  std::vector<std::vector<std::pair<double, std::size_t>>> top(fits.size());
  for (std::size_t k = 0; k < pairs.size(); ++k)
    for (std::size_t i = 0; i < fits.size(); ++i) {
      RegimeFit& f = fits[i];
      const double ratio = eval(f, pairs[k]);
      if (ratio < 0.0) continue;
      ++f.pairsUsed;
      if (ratio > f.constant) {
        f.constant = ratio;
        f.attaining = pairs[k];
      }
      auto& t = top[i];
      if (t.size() < kStarts || ratio > t.back().first) {
        t.emplace_back(ratio, k);
        std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        if (t.size() > kStarts) t.pop_back();
      }
    }
  if (refineSeparation > 0.0)
    for (std::size_t i = 0; i < fits.size(); ++i)
      for (const auto& [val, k] : top[i])
        if (val > 0.0) refine_fit(fits[i], pairs[k], val, eval, refineSeparation);
  return fits;
}

PoissonFit verify_poisson_bounds(const Domain& domain, int m, std::size_t samples, std::uint64_t seed) {
  const PoissonKernel K(domain, m, 0);
  const Point c = domain.center();
  const double R = domain.radius();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  PoissonFit fit;
  for (std::size_t k = 0; k < samples; ++k) {
    const double depth = R * std::exp(std::log(1e-4) * U(rng));
    const double th = 2 * kPi * U(rng);
    const Point x{c[0] + (R - depth) * std::cos(th), c[1] + (R - depth) * std::sin(th)};
    const double off = (U(rng) < 0.5 ? -1.0 : 1.0) * kPi * std::exp(std::log(1e-4) * U(rng));
    const Point q{c[0] + R * std::cos(th + off), c[1] + R * std::sin(th + off)};
    const double rho = distance(x, q);
    const double ratio = std::abs(K(x, q)) * std::pow(rho, domain.dim() + m - 1) / domain.boundary_distance(x);
    if (ratio > fit.constant) {
      fit.constant = ratio;
      fit.attainingX = x;
      fit.attainingQ = q;
    }
  }
  for (double frac : {0.0, 0.25, 0.5, 0.75, 0.9}) {
    for (double th : {0.0, 1.0, 2.5}) {
      const Point x{c[0] + frac * R * std::cos(th), c[1] + frac * R * std::sin(th)};
      fit.normalizationError = std::max(fit.normalizationError, std::abs(K.boundary_integral(x) - 1.0));
    }
  }
  return fit;
}

}  // namespace morreylab
