#include "morreylab/grid.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace morreylab {

Domain Domain::interval(double a, double b) {
  if (!(b > a)) throw Error("interval requires a < b");
  Domain d;
  d.kind_ = Kind::Interval;
  d.a_ = a;
  d.b_ = b;
  return d;
}

Domain Domain::disk(Point center, double radius) {
  if (!(radius > 0.0)) throw Error("disk requires a positive radius");
  Domain d;
  d.kind_ = Kind::Disk;
  d.center_ = center;
  d.radius_ = radius;
  return d;
}

double Domain::diameter() const { return kind_ == Kind::Interval ? b_ - a_ : 2.0 * radius_; }

double Domain::boundary_distance(const Point& x) const {
  if (kind_ == Kind::Interval) return std::min(x[0] - a_, b_ - x[0]);
  return radius_ - distance(x, center_);
}

Point Domain::middle() const {
  if (kind_ == Kind::Interval) return {0.5 * (a_ + b_), 0.0};
  return center_;
}

Point Domain::box_lower() const {
  if (kind_ == Kind::Interval) return {a_, 0.0};
  return {center_[0] - radius_, center_[1] - radius_};
}

bool Domain::contains_ball(const Ball& b, double tol) const {
  if (kind_ == Kind::Interval) return b.center[0] - b.radius >= a_ - tol && b.center[0] + b.radius <= b_ + tol;
  return distance(b.center, center_) + b.radius <= radius_ + tol;
}

std::string Domain::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::Interval)
    os << "Interval(" << a_ << "," << b_ << ")";
  else
    os << "Disk((" << center_[0] << "," << center_[1] << ")," << radius_ << ")";
  return os.str();
}

Grid::Grid(const Domain& domain, int cellsPerAxis, int padCells)
    : domain_(domain), n_(cellsPerAxis), pad_(padCells) {
  if (n_ < 2) throw Error("grid needs at least two cells per axis");
  if (pad_ < 0) throw Error("negative padding");
  h_ = domain_.box_width() / n_;
  measure_ = domain_.dim() == 1 ? h_ : h_ * h_;
  const Point lo = domain_.box_lower();
  lower_ = {lo[0] - pad_ * h_, domain_.dim() == 1 ? 0.0 : lo[1] - pad_ * h_};

  const int ext = extent();
  const int rows = domain_.dim() == 1 ? 1 : ext;
  lookup_.assign(static_cast<std::size_t>(ext) * rows, -1);
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < ext; ++i) {
      Point c = lattice_point(i, j);
      if (domain_.contains(c)) {
        lookup_[static_cast<std::size_t>(j) * ext + i] = static_cast<long>(cells_.size());
        cells_.push_back({i, j, c});
      }
    }
  }
}

Point Grid::lattice_point(int i, int j) const {
  if (dim() == 1) return {lower_[0] + (i + 0.5) * h_, 0.0};
  return {lower_[0] + (i + 0.5) * h_, lower_[1] + (j + 0.5) * h_};
}

long Grid::index_of(int i, int j) const {
  const int ext = extent();
  if (i < 0 || i >= ext) return -1;
  if (dim() == 1) return j == 0 ? lookup_[i] : -1;
  if (j < 0 || j >= ext) return -1;
  return lookup_[static_cast<std::size_t>(j) * ext + i];
}

long Grid::locate(const Point& x) const {
  const int i = static_cast<int>(std::floor((x[0] - lower_[0]) / h_));
  const int j = dim() == 1 ? 0 : static_cast<int>(std::floor((x[1] - lower_[1]) / h_));
  return index_of(i, j);
}

SampledField::SampledField(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) throw Error("field size does not match grid");
}

SampledField::SampledField(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {
  values_.assign(grid_->size(), 0.0);
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SampledField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

SampledField SampledField::operator+(const SampledField& o) const {
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += o.values_[k];
  return {grid_, std::move(v)};
}

SampledField SampledField::operator-(const SampledField& o) const {
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= o.values_[k];
  return {grid_, std::move(v)};
}

SampledField SampledField::operator*(double c) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= c;
  return {grid_, std::move(v)};
}

SampledField SampledField::abs() const {
  std::vector<double> v(values_);
  for (double& x : v) x = std::abs(x);
  return {grid_, std::move(v)};
}

double integrate(const SampledField& f, const std::optional<Ball>& region) {
  const Grid& g = f.grid();
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (region && !region->contains(g.node(k))) continue;
    sum += f[k];
    ++hits;
  }
  if (hits == 0) throw Error("empty region");
  return sum * g.cell_measure();
}

std::vector<double> log_space(double lo, double hi, int count) {
  if (count < 2) return {hi};
  std::vector<double> r(count);
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (int k = 0; k < count; ++k) r[k] = std::exp(l0 + (l1 - l0) * k / (count - 1));
  r.front() = lo;
  r.back() = hi;
  return r;
}

std::vector<Ball> ball_sweep(const Grid& grid, int centersPerAxis, int radiiCount) {
  if (centersPerAxis < 2 || radiiCount < 2) throw Error("sweep counts must be at least 2");
  const Domain& dom = grid.domain();
  const std::vector<double> radii = log_space(grid.spacing(), dom.diameter(), radiiCount);
  const Point lo = dom.box_lower();
  const double w = dom.box_width();

  std::vector<Point> centers;
  if (dom.dim() == 1) {
    for (int i = 0; i < centersPerAxis; ++i) centers.push_back({lo[0] + (i + 0.5) * w / centersPerAxis, 0.0});
  } else {
    for (int j = 0; j < centersPerAxis; ++j)
      for (int i = 0; i < centersPerAxis; ++i) {
        Point c{lo[0] + (i + 0.5) * w / centersPerAxis, lo[1] + (j + 0.5) * w / centersPerAxis};
        if (dom.contains(c)) centers.push_back(c);
      }
  }
  std::vector<Ball> balls;
  balls.reserve(centers.size() * radii.size());
  for (const Point& c : centers)
    for (double r : radii) balls.push_back({c, r});
  return balls;
}

void write_field_csv(const std::string& path, const SampledField& f, const std::string& valueName) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << std::setprecision(17);
  const Grid& g = f.grid();
  out << (g.dim() == 1 ? "x," : "x,y,") << valueName << "\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point& p = g.node(k);
    out << p[0] << ",";
    if (g.dim() == 2) out << p[1] << ",";
    out << f[k] << "\n";
  }
}

}  // namespace morreylab

namespace morreylab {

SweepIndex::SweepIndex(std::shared_ptr<const Grid> grid, std::vector<Ball> balls)
    : grid_(std::move(grid)), balls_(std::move(balls)) {
  if (balls_.empty()) throw Error("empty sweep");
  std::vector<std::size_t> order(balls_.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Ball& x = balls_[a];
    const Ball& y = balls_[b];
    if (x.center != y.center) return x.center < y.center;
    return x.radius < y.radius;
  });
  for (std::size_t k : order) {
    const Ball& b = balls_[k];
    if (!(b.radius > 0.0)) throw Error("ball radius must be positive");
    if (groups_.empty() || groups_.back().center != b.center) groups_.push_back({b.center, {}, {}, {}});
    groups_.back().radii.push_back(b.radius);
    groups_.back().ballOfRadius.push_back(k);
  }
  const Grid& g = *grid_;
  for (Group& grp : groups_) {
    if (grp.radii.size() >= 65535) throw Error("too many radii per center");
    grp.bin.resize(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) {
      const double dist = distance(g.node(c), grp.center);
      // first radius strictly greater than the distance (open balls)
      auto it = std::upper_bound(grp.radii.begin(), grp.radii.end(), dist);
      grp.bin[c] = static_cast<std::uint16_t>(it - grp.radii.begin());
    }
  }
}

std::vector<double> SweepIndex::sums(std::span<const double> values) const {
  std::vector<double> out(balls_.size(), 0.0);
  for (const Group& grp : groups_) {
    const std::size_t R = grp.radii.size();
    std::vector<double> acc(R + 1, 0.0);
    for (std::size_t c = 0; c < values.size(); ++c) acc[grp.bin[c]] += values[c];
    double run = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      run += acc[r];
      out[grp.ballOfRadius[r]] = run;
    }
  }
  return out;
}

std::vector<std::size_t> SweepIndex::counts() const {
  std::vector<std::size_t> out(balls_.size(), 0);
  for (const Group& grp : groups_) {
    const std::size_t R = grp.radii.size();
    std::vector<std::size_t> acc(R + 1, 0);
    for (std::uint16_t b : grp.bin) ++acc[b];
    std::size_t run = 0;
    for (std::size_t r = 0; r < R; ++r) {
      run += acc[r];
      out[grp.ballOfRadius[r]] = run;
    }
  }
  return out;
}

std::vector<double> SweepIndex::maxima(std::span<const double> values) const {
  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> out(balls_.size(), ninf);
  for (const Group& grp : groups_) {
    const std::size_t R = grp.radii.size();
    std::vector<double> acc(R + 1, ninf);
    for (std::size_t c = 0; c < values.size(); ++c) acc[grp.bin[c]] = std::max(acc[grp.bin[c]], values[c]);
    double run = ninf;
    for (std::size_t r = 0; r < R; ++r) {
      run = std::max(run, acc[r]);
      out[grp.ballOfRadius[r]] = run;
    }
  }
  return out;
}

std::vector<double> SweepIndex::level_set_sup(std::span<const double> level, std::span<const double> mass,
                                              double p) const {
  std::vector<std::size_t> order(level.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return level[a] > level[b]; });

  std::vector<double> out(balls_.size(), 0.0);
  for (const Group& grp : groups_) {
    const std::size_t R = grp.radii.size();
    std::vector<double> cum(R, 0.0), best(R, 0.0);
    std::size_t k = 0;
    while (k < order.size()) {
      const double v = level[order[k]];
      if (!(v > 0.0)) break;
      std::size_t lowestBin = R;
      // add the whole tie group before evaluating the left limit at v
      while (k < order.size() && level[order[k]] == v) {
        const std::size_t c = order[k];
        const std::size_t b = grp.bin[c];
        for (std::size_t r = b; r < R; ++r) cum[r] += mass[c];
        lowestBin = std::min(lowestBin, b);
        ++k;
      }
      for (std::size_t r = lowestBin; r < R; ++r) best[r] = std::max(best[r], v * std::pow(cum[r], 1.0 / p));
    }
    for (std::size_t r = 0; r < R; ++r) out[grp.ballOfRadius[r]] = best[r];
  }
  return out;
}

}  // namespace morreylab

namespace morreylab {

std::vector<MultiIndex> multi_indices(int dim, int ord) {
  if (dim == 1) return {{ord, 0}};
  std::vector<MultiIndex> out;
  for (int a = ord; a >= 0; --a) out.push_back({a, ord - a});
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int maxOrder) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= maxOrder; ++k)
    for (const MultiIndex& s : multi_indices(dim, k)) out.push_back(s);
  return out;
}

}  // namespace morreylab
