#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "morreylab/grid.hpp"

namespace morreylab {

using RealFunction = std::function<double(double)>;

/// Weights v1, v2, w on (0, d) for the weighted Hardy operator.
struct HardySetting {
  double d = 1.0;
  RealFunction v1 = [](double) { return 1.0; };
  RealFunction v2 = [](double) { return 1.0; };
  RealFunction w = [](double) { return 1.0; };
};

/// Piecewise-linear nondecreasing function on [x_0, x_last]; a repeated
/// abscissa encodes a jump. Constant extension outside the table.
class MonotoneFunction {
public:
  /// Throws "monotonicity violated" if ys decreases.
  MonotoneFunction(std::vector<double> xs, std::vector<double> ys);
  static MonotoneFunction constant(double c, double d);
  /// Sampled from fn on `points` uniform nodes of [0, d].
  static MonotoneFunction tabulate(const RealFunction& fn, double d, int points);
  /// χ_(a,d) scaled by height.
  static MonotoneFunction step(double a, double d, double height = 1.0);

  double operator()(double t) const;
  /// Breakpoints (deduplicated), used to split quadrature.
  std::vector<double> breakpoints() const;
  bool is_zero() const;

private:
  std::vector<double> xs_, ys_;
};

/// ∫_r^d g(t) w(t) dt; requires 0 < r < d.
double hardy_apply(const MonotoneFunction& g, const HardySetting& s, double r);

struct HardyOptions {
  int radii = 200;          // per end of (0, d)
  double innerFraction = 1e-9;  // smallest r and d - r as a fraction of d
  int essSupPoints = 64;
};

struct HardyConstant {
  double value = 0.0;  // +inf means unbounded
  bool unbounded = false;
  double attainingRadius = 0.0;
  double valueDoubledGrid = 0.0;
  bool gridSensitive = false;
};

/// B = ess sup_r v2(r) ∫_r^d w(t) / [ess sup_{t<s<d} v1(s)] dt, with 1/∞ = 0
/// and 0·∞ = 0.
HardyConstant hardy_best_constant(const HardySetting& s, const HardyOptions& options = {});

struct HardyRow {
  std::string id;
  double lhs = 0.0;  // ess sup v2 · H*_w g
  double rhs = 0.0;  // ess sup v1 · g
  double ratio = 0.0;
  bool holds = true;
};

struct HardyReport {
  double bestConstant = 0.0;
  double maxRatio = 0.0;
  bool allHold = true;
  std::vector<HardyRow> rows;
};

HardyReport hardy_verify_inequality(const HardySetting& s, const std::vector<MonotoneFunction>& family,
                                    const std::vector<std::string>& ids = {}, const HardyOptions& options = {});

/// 50 nondecreasing test functions on (0, d): steps χ_(a,d) with a on a log
/// grid and powers t^q.
std::vector<MonotoneFunction> hardy_default_family(double d, std::vector<std::string>* ids = nullptr);

/// The r grid used by the Hardy functionals: log-dense near both 0 and d.
std::vector<double> hardy_radius_grid(double d, const HardyOptions& options);

}  // namespace morreylab
