#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace morreylab {

/// Error raised for every contract violation in the library. The message is
/// the short diagnostic named by the operation ("empty region", ...).
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A point of R^1 or R^2. One-dimensional points keep the second coordinate
/// at zero, so Euclidean distances work unchanged in both dimensions.
using Point = std::array<double, 2>;

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

inline double norm(const Point& a) { return std::hypot(a[0], a[1]); }

/// Derivative multi-index (s1, s2); the second entry is zero in 1D.
using MultiIndex = std::array<int, 2>;

inline int order(const MultiIndex& s) { return s[0] + s[1]; }

/// All multi-indices of exactly the given order in dimension dim.
std::vector<MultiIndex> multi_indices(int dim, int ord);
/// All multi-indices of order 0..maxOrder, by increasing order.
std::vector<MultiIndex> multi_indices_up_to(int dim, int maxOrder);

struct Ball {
  Point center{};
  double radius = 0.0;

  bool contains(const Point& p) const { return distance(p, center) < radius; }
};

/// Model domain: an interval in R^1 or a disk in R^2.
class Domain {
public:
  enum class Kind { Interval, Disk };

  static Domain interval(double a, double b);
  static Domain disk(Point center, double radius);

  Kind kind() const { return kind_; }
  int dim() const { return kind_ == Kind::Interval ? 1 : 2; }
  double diameter() const;
  /// Distance to the boundary; negative outside.
  double boundary_distance(const Point& x) const;
  bool contains(const Point& x) const { return boundary_distance(x) > 0.0; }

  // Interval endpoints (Interval only).
  double a() const { return a_; }
  double b() const { return b_; }
  // Disk geometry (Disk only).
  const Point& center() const { return center_; }
  double radius() const { return radius_; }

  /// Midpoint of the interval or the disk center.
  Point middle() const;
  /// Lower-left corner and side length of the bounding box.
  Point box_lower() const;
  double box_width() const { return diameter(); }

  /// Is the ball B wholly contained in the domain (closure allowed)?
  bool contains_ball(const Ball& b, double tol = 1e-12) const;

  std::string describe() const;

private:
  Kind kind_ = Kind::Interval;
  double a_ = 0.0, b_ = 1.0;
  Point center_{};
  double radius_ = 1.0;
};

struct Cell {
  int i = 0, j = 0;  // lattice indices in the (padded) box
  Point center{};
};

/// Uniform cell-centered grid over the domain's bounding box (optionally
/// padded by whole cells), with a mask of cells whose centers lie in the
/// domain. Only masked cells carry field values.
class Grid {
public:
  Grid(const Domain& domain, int cellsPerAxis, int padCells = 0);

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  int resolution() const { return n_; }
  int pad() const { return pad_; }
  /// Lattice extent per axis including padding.
  int extent() const { return n_ + 2 * pad_; }
  double spacing() const { return h_; }
  double cell_measure() const { return measure_; }
  std::size_t size() const { return cells_.size(); }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& cell(std::size_t k) const { return cells_[k]; }
  const Point& node(std::size_t k) const { return cells_[k].center; }
  Point lattice_point(int i, int j) const;

  /// Index of the masked cell at lattice (i,j), or -1.
  long index_of(int i, int j) const;
  /// Masked cell whose lattice cell contains x, or -1.
  long locate(const Point& x) const;

private:
  Domain domain_;
  int n_;
  int pad_;
  double h_;
  double measure_;
  Point lower_{};
  std::vector<Cell> cells_;
  std::vector<long> lookup_;
};

/// Real values on the masked cells of a grid.
class SampledField {
public:
  SampledField() = default;
  SampledField(std::shared_ptr<const Grid> grid, std::vector<double> values);
  explicit SampledField(std::shared_ptr<const Grid> grid);

  template <class F>
  static SampledField sample(std::shared_ptr<const Grid> grid, F&& fn) {
    std::vector<double> v(grid->size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid->node(k));
    return SampledField(std::move(grid), std::move(v));
  }

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  std::size_t size() const { return values_.size(); }

  double max_abs() const;
  bool all_finite() const;

  SampledField operator+(const SampledField& o) const;
  SampledField operator-(const SampledField& o) const;
  SampledField operator*(double c) const;
  SampledField abs() const;

private:
  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
};

/// Midpoint quadrature over the masked cells whose centers lie in `region`
/// (the whole domain when empty). Throws "empty region" when no cell qualifies.
double integrate(const SampledField& f, const std::optional<Ball>& region = std::nullopt);

/// Centers on a coarse sub-grid of the domain times log-spaced radii in
/// [h, diam]; the extreme radii are exact.
std::vector<Ball> ball_sweep(const Grid& grid, int centersPerAxis, int radiiCount);

/// Groups a list of balls by center so that sums over every ball of the list
/// cost one pass over the grid per distinct center. Radii of a center are
/// binned once; per-ball quantities come out in the original list order.
class SweepIndex {
public:
  SweepIndex(std::shared_ptr<const Grid> grid, std::vector<Ball> balls);

  const std::vector<Ball>& balls() const { return balls_; }
  const Grid& grid() const { return *grid_; }

  /// Sum of `values` over the member cells of every ball.
  std::vector<double> sums(std::span<const double> values) const;
  /// Number of member cells of every ball.
  std::vector<std::size_t> counts() const;
  /// Max of `values` over member cells (-inf for empty balls).
  std::vector<double> maxima(std::span<const double> values) const;
  /// For every ball: max over thresholds v of v * (sum of mass over member
  /// cells with level >= v)^(1/p). This is the discrete weak-type functional
  /// sup_t t * mass({level > t})^(1/p) evaluated as t approaches each value
  /// of `level` from below.
  std::vector<double> level_set_sup(std::span<const double> level, std::span<const double> mass, double p) const;

private:
  struct Group {
    Point center{};
    std::vector<double> radii;             // ascending
    std::vector<std::size_t> ballOfRadius;  // original index per radius
    std::vector<std::uint16_t> bin;        // per cell: first radius index containing it, or radii.size()
  };
  std::shared_ptr<const Grid> grid_;
  std::vector<Ball> balls_;
  std::vector<Group> groups_;
};

/// `count` log-spaced values from lo to hi with exact endpoints.
std::vector<double> log_space(double lo, double hi, int count);

/// Writes one CSV row per masked cell: coordinates followed by the value.
void write_field_csv(const std::string& path, const SampledField& f, const std::string& valueName = "value");

}  // namespace morreylab
