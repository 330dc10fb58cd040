#include "morreylab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace morreylab {

PhiFunction PhiFunction::power_law(double lambda, double p, int n) {
  if (!(p >= 1.0)) throw Error("invalid exponent");
  PhiFunction f;
  f.kind_ = Kind::PowerLaw;
  f.lambda_ = lambda;
  f.p_ = p;
  f.n_ = n;
  return f;
}

PhiFunction PhiFunction::weight_measure(double k, double p, Weight w) {
  if (!(p >= 1.0)) throw Error("invalid exponent");
  PhiFunction f;
  f.kind_ = Kind::WeightMeasure;
  f.k_ = k;
  f.p_ = p;
  f.weight_ = std::move(w);
  return f;
}

PhiFunction PhiFunction::inverse_weight_measure(double p, Weight w) {
  if (!(p >= 1.0)) throw Error("invalid exponent");
  PhiFunction f;
  f.kind_ = Kind::InverseWeightMeasure;
  f.p_ = p;
  f.weight_ = std::move(w);
  return f;
}

PhiFunction PhiFunction::custom(std::vector<double> radii, std::vector<double> values) {
  if (radii.size() != values.size() || radii.empty()) throw Error("custom phi table is malformed");
  PhiFunction f;
  f.kind_ = Kind::Custom;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !(values[k] > 0.0)) throw Error("invalid phi");
    if (k && !(radii[k] > radii[k - 1])) throw Error("custom phi radii must increase");
    f.logR_.push_back(std::log(radii[k]));
    f.logV_.push_back(std::log(values[k]));
  }
  return f;
}

double PhiFunction::operator()(double r, double m) const {
  switch (kind_) {
    case Kind::PowerLaw:
      return scale_ * std::pow(r, (lambda_ - n_) / p_);
    case Kind::WeightMeasure:
      return scale_ * std::pow(m, (k_ - 1.0) / p_);
    case Kind::InverseWeightMeasure:
      return scale_ * std::pow(m, -1.0 / p_);
    case Kind::Custom: {
      const double lr = std::log(r);
      if (lr <= logR_.front()) return scale_ * std::exp(logV_.front());
      if (lr >= logR_.back()) return scale_ * std::exp(logV_.back());
      const auto it = std::upper_bound(logR_.begin(), logR_.end(), lr);
      const std::size_t k = static_cast<std::size_t>(it - logR_.begin());
      const double s = (lr - logR_[k - 1]) / (logR_[k] - logR_[k - 1]);
      return scale_ * std::exp(logV_[k - 1] + s * (logV_[k] - logV_[k - 1]));
    }
  }
  return 0.0;
}

PhiFunction PhiFunction::scaled(double c) const {
  PhiFunction f = *this;
  f.scale_ *= c;
  return f;
}

std::string PhiFunction::describe() const {
  std::ostringstream os;
  if (scale_ != 1.0) os << scale_ << "*";
  switch (kind_) {
    case Kind::PowerLaw: os << "power_law(lambda=" << lambda_ << ",p=" << p_ << ")"; break;
    case Kind::WeightMeasure: os << "weight_measure(k=" << k_ << ",p=" << p_ << ")"; break;
    case Kind::InverseWeightMeasure: os << "inverse_weight_measure(p=" << p_ << ")"; break;
    case Kind::Custom: os << "custom(" << logR_.size() << " pts)"; break;
  }
  return os.str();
}

double lp_weighted_norm(const SampledField& f, const Weight& w, double p, const Ball& region) {
  if (!(p >= 1.0)) throw Error("invalid exponent");
  const Grid& g = f.grid();
  double s = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!region.contains(g.node(k))) continue;
    ++hits;
    if (f[k] != 0.0) s += std::pow(std::abs(f[k]), p) * w.cell_integral(g.node(k), g.spacing(), g.dim());
  }
  if (hits == 0) throw Error("empty region");
  return std::pow(s, 1.0 / p);
}

double weak_lp_weighted_norm(const SampledField& f, const Weight& w, double p, const Ball& region) {
  if (!(p >= 1.0)) throw Error("invalid exponent");
  const Grid& g = f.grid();
  std::vector<std::pair<double, double>> cells;  // (|f|, mass)
  for (std::size_t k = 0; k < g.size(); ++k)
    if (region.contains(g.node(k))) cells.emplace_back(std::abs(f[k]), w.cell_integral(g.node(k), g.spacing(), g.dim()));
  if (cells.empty()) throw Error("empty region");
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = 0.0, cum = 0.0;
  std::size_t k = 0;
  while (k < cells.size() && cells[k].first > 0.0) {
    const double v = cells[k].first;
    while (k < cells.size() && cells[k].first == v) cum += cells[k++].second;
    best = std::max(best, v * std::pow(cum, 1.0 / p));
  }
  return best;
}

MorreyEvaluator::MorreyEvaluator(std::shared_ptr<const Grid> grid, std::vector<Ball> sweep, Weight w, double p,
                                 Prefactor prefactor)
    : grid_(grid), index_(grid, std::move(sweep)), w_(std::move(w)), p_(p), prefactor_(prefactor) {
  if (!(p_ >= 1.0)) throw Error("invalid exponent");
  mass_ = cell_masses(w_, *grid_);
  ballWeight_ = ball_measures_of(w_);
}

std::vector<double> MorreyEvaluator::ball_measures_of(const Weight& v) const {
  if (prefactor_ == Prefactor::FullBall) {
    std::vector<double> out;
    out.reserve(index_.balls().size());
    for (const Ball& b : index_.balls()) out.push_back(v.ball_measure(b.center, b.radius, grid_->dim()));
    return out;
  }
  if (!mass_.empty() && v.describe() == w_.describe()) return index_.sums(mass_);
  return index_.sums(cell_masses(v, *grid_));
}

std::vector<double> MorreyEvaluator::local_norms(const SampledField& f, bool weak) const {
  if (f.size() != grid_->size()) throw Error("field grid does not match sweep grid");
  if (weak) {
    std::vector<double> level(f.size());
    for (std::size_t k = 0; k < level.size(); ++k) level[k] = std::abs(f[k]);
    return index_.level_set_sup(level, mass_, p_);
  }
  std::vector<double> integrand(f.size());
  for (std::size_t k = 0; k < integrand.size(); ++k)
    integrand[k] = f[k] == 0.0 ? 0.0 : std::pow(std::abs(f[k]), p_) * mass_[k];
  std::vector<double> s = index_.sums(integrand);
  for (double& v : s) v = std::pow(v, 1.0 / p_);
  return s;
}

MorreyResult MorreyEvaluator::reduce(const std::vector<double>& localNorms, const PhiFunction& phi) const {
  const std::vector<Ball>& balls = index_.balls();
  const std::vector<double>* phiMeasure = &ballWeight_;
  if (phi.weight() && phi.weight()->describe() != w_.describe()) {
    const std::string key = phi.weight()->describe();
    auto it = phiMeasures_.find(key);
    if (it == phiMeasures_.end()) it = phiMeasures_.emplace(key, ball_measures_of(*phi.weight())).first;
    phiMeasure = &it->second;
  }
  MorreyResult res;
  res.attainingBall = balls.front();
  double best = -1.0;
  for (std::size_t b = 0; b < balls.size(); ++b) {
    const double W = ballWeight_[b];
    if (!(W > 0.0)) continue;
    const double ph = phi(balls[b].radius, (*phiMeasure)[b]);
    if (!(ph > 0.0) || !std::isfinite(ph)) throw Error("invalid phi");
    const double val = localNorms[b] / (ph * std::pow(W, 1.0 / p_));
    if (val > best) {
      best = val;
      res.attainingBall = balls[b];
    }
  }
  res.value = std::max(best, 0.0);
  return res;
}

MorreyResult MorreyEvaluator::norm(const SampledField& f, const PhiFunction& phi, bool weak) const {
  return reduce(local_norms(f, weak), phi);
}

MorreyResult morrey_norm(const SampledField& f, const Weight& w, const PhiFunction& phi, double p,
                         const std::vector<Ball>& sweep, bool weak, Prefactor prefactor) {
  MorreyEvaluator eval(f.grid_ptr(), sweep, w, p, prefactor);
  return eval.norm(f, phi, weak);
}

double sobolev_morrey_norm(const Jet& jet, int m, const MorreyEvaluator& eval, const PhiFunction& phi) {
  if (jet.empty()) throw Error("incomplete jet");
  const int dim = jet.begin()->second.grid().dim();
  double total = 0.0;
  for (const MultiIndex& s : multi_indices_up_to(dim, m)) {
    auto it = jet.find(s);
    if (it == jet.end()) throw Error("incomplete jet");
    total += eval.norm(it->second, phi).value;
  }
  return total;
}

double sobolev_morrey_norm(const Jet& jet, int m, const Weight& w, const PhiFunction& phi, double p,
                           const std::vector<Ball>& sweep) {
  if (jet.empty()) throw Error("incomplete jet");
  MorreyEvaluator eval(jet.begin()->second.grid_ptr(), sweep, w, p);
  return sobolev_morrey_norm(jet, m, eval, phi);
}

namespace {

struct ConditionPass {
  double constant = 0.0;
  double radius = 0.0;
};

ConditionPass condition_pass(const PhiFunction& phi1, const PhiFunction& phi2, const Weight& w, double p,
                             const Point& x, int dim, std::vector<double> radii, double upper, int essInfPoints,
                             double panelsPerLogUnit) {
  auto measure = [&](const Weight& v, double r) { return v.ball_measure(x, r, dim); };
  auto phiAt = [&](const PhiFunction& phi, double r, double wB) {
    if (!phi.weight()) return phi(r, 0.0);
    if (phi.weight()->describe() == w.describe()) return phi(r, wB);
    return phi(r, measure(*phi.weight(), r));
  };
  auto g = [&](double s) {
    const double wB = measure(w, s);
    return phiAt(phi1, s, wB) * std::pow(wB, 1.0 / p);
  };

  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  std::erase_if(radii, [&](double r) { return !(r > 0.0) || !(r < upper); });
  if (radii.empty()) throw Error("radius grid must lie in (0, upperLimit)");

  // ess inf over (t, U): g at t itself plus suffix minima over one log grid
  const double l0 = std::log(radii.front()), lu = std::log(upper);
  const int points = std::max(2, static_cast<int>(std::ceil((lu - l0) * essInfPoints)) + 1);
  std::vector<double> suffix(points);
  for (int k = 0; k < points; ++k) suffix[k] = g(std::exp(l0 + (lu - l0) * k / (points - 1)));
  for (int k = points - 1; k-- > 0;) suffix[k] = std::min(suffix[k], suffix[k + 1]);
  auto integrand = [&](double t) {
    const double pos = (std::log(t) - l0) / (lu - l0) * (points - 1);
    const int next = std::clamp(static_cast<int>(std::floor(pos)) + 1, 0, points - 1);
    const double inner = std::min(g(t), suffix[next]);
    const double val = inner / std::pow(measure(w, t), 1.0 / p);
    if (!std::isfinite(val)) throw Error("divergent condition");
    return val;
  };

  // segment k spans [radii[k], radii[k+1]] (last: [radii.back(), upper]), in τ = ln t
  std::vector<double> segment(radii.size(), 0.0);
  using GL = boost::math::quadrature::gauss<double, 8>;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double a = std::log(radii[k]);
    const double b = std::log(k + 1 < radii.size() ? radii[k + 1] : upper);
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * panelsPerLogUnit)));
    double s = 0.0;
    for (int j = 0; j < panels; ++j) {
      const double pa = a + (b - a) * j / panels, pb = a + (b - a) * (j + 1) / panels;
      s += GL::integrate([&](double tau) { return integrand(std::exp(tau)); }, pa, pb);
    }
    segment[k] = s;
  }
  ConditionPass out;
  double tail = 0.0;
  out.constant = -1.0;
  for (std::size_t k = radii.size(); k-- > 0;) {
    tail += segment[k];
    const double r = radii[k];
    const double ratio = tail / phiAt(phi2, r, measure(w, r));
    if (!std::isfinite(ratio)) throw Error("divergent condition");
    if (ratio >= out.constant) {
      out.constant = ratio;
      out.radius = r;
    }
  }
  return out;
}

}  // namespace

ConditionResult check_phi_condition(const PhiFunction& phi1, const PhiFunction& phi2, const Weight& w, double p,
                                    const Point& x, int dim, const std::vector<double>& rGrid, double upperLimit,
                                    const ConditionOptions& options) {
  if (!(p >= 1.0)) throw Error("invalid exponent");
  if (options.essInfPoints < 1) throw Error("ess inf grid needs at least one point per log unit");
  ConditionResult res;
  const ConditionPass base =
      condition_pass(phi1, phi2, w, p, x, dim, rGrid, upperLimit, options.essInfPoints, options.panelsPerLogUnit);
  res.constant = base.constant;
  res.attainingRadius = base.radius;
  res.constantDoubledGrid = condition_pass(phi1, phi2, w, p, x, dim, rGrid, upperLimit, 2 * options.essInfPoints,
                                           options.panelsPerLogUnit)
                                .constant;
  res.gridSensitive = std::abs(res.constantDoubledGrid - res.constant) > options.gridTolerance * res.constantDoubledGrid;

  std::vector<double> shortGrid;
  for (double r : rGrid)
    if (r < upperLimit / 10.0) shortGrid.push_back(r);
  if (!shortGrid.empty()) {
    res.constantShortLimit = condition_pass(phi1, phi2, w, p, x, dim, shortGrid, upperLimit / 10.0,
                                            options.essInfPoints, options.panelsPerLogUnit)
                                 .constant;
    res.truncationSensitivity = std::abs(res.constant - res.constantShortLimit) / res.constant;
    res.truncationSensitive = res.truncationSensitivity > options.truncationTolerance;
  }
  return res;
}

}  // namespace morreylab
