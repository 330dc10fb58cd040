#pragma once

#include <optional>
#include <vector>

#include "morreylab/greens.hpp"
#include "morreylab/grid.hpp"

namespace morreylab {

/// k(z) = D^α Γ(z) with |α| = 2m: homogeneous of degree -n with zero
/// angular mean. The construction checks the mean (to 1e-8 of the kernel
/// scale) and records C_k = max |k| on the unit sphere. In 1D the kernel
/// vanishes identically off the origin.
class CZKernel {
public:
  CZKernel(int n, int m, MultiIndex alpha);

  int n() const { return gamma_.n(); }
  int m() const { return gamma_.m(); }
  const MultiIndex& alpha() const { return alpha_; }
  bool vanishes() const { return gamma_.n() == 1; }
  double operator()(const Point& z) const;
  /// sup |k(z)| |z|^n.
  double bound() const { return bound_; }
  double angular_mean() const { return mean_; }

private:
  FundamentalSolution gamma_;
  MultiIndex alpha_;
  double bound_ = 0.0;
  double mean_ = 0.0;
};

/// `count` log-spaced radii in [h, d].
std::vector<double> operator_radii(const Grid& grid, int count = 48);

/// Number of lattice points (masked or not, the lattice extended beyond the
/// box) strictly inside B(x, t). Times the cell measure this is |B(x,t)| as
/// the grid sees it.
std::size_t lattice_count(const Grid& grid, const Point& x, double t);

/// max over the radii of the average of |f| (zero outside Ω) over B(x,t).
double maximal(const SampledField& f, const Point& x, const std::vector<double>& radii);

/// Σ over masked cells with |x - y| >= ε of k(x - y) f(y) |cell|. Throws
/// "truncation below resolution" when ε is below one cell width.
double truncated_singular(const SampledField& f, const CZKernel& k, const Point& x, double eps);

/// max over the ε grid of |K_ε f(x)|.
double maximal_singular(const SampledField& f, const CZKernel& k, const Point& x, const std::vector<double>& eps);

/// Mf at every node, for several fields at once (FFT shell sums).
std::vector<SampledField> maximal_fields(const std::vector<SampledField>& fs, const std::vector<double>& radii);
SampledField maximal_field(const SampledField& f, const std::vector<double>& radii);

SampledField truncated_singular_field(const SampledField& f, const CZKernel& k, double eps);
/// K*f at every node, for several fields at once.
std::vector<SampledField> maximal_singular_fields(const std::vector<SampledField>& fs, const CZKernel& k,
                                                  const std::vector<double>& eps);
SampledField maximal_singular_field(const SampledField& f, const CZKernel& k, const std::vector<double>& eps);

struct IdentityReport {
  Point x{};
  double lhs = 0.0;        // D^{α-β} of the D^β potential at x (central differences)
  double kf = 0.0;         // K f(x), symmetric exclusion of one cell
  double f = 0.0;          // f(x)
  double aEstimate = 0.0;  // (lhs - kf) / f; NaN when f(x) = 0
  double aClassical = 0.0; // -δ_ij / n
  /// max over interior nodes of |lhs - kf - a f| / max|f|
  double maxDiscrepancy = 0.0;
  /// max over interior nodes of |Σ ∂_ii (Γ*f) + f| / max|f|
  double traceError = 0.0;
  std::size_t interiorNodes = 0;
  std::size_t skippedNodes = 0;
};

/// D^α ∫ D^β Γ(x-y) f(y) dy = K f(x) + a f(x) for the Newtonian potential
/// (n = 2, m = 1, |α| = 2, β < α, |β| = 1). The potential gradient uses exact
/// cell integrals of ∂Γ; nodes within two cells of ∂Ω are skipped.
IdentityReport singular_identity_check(const SampledField& f, MultiIndex alpha, MultiIndex beta,
                                       std::optional<Point> x = std::nullopt);

/// The D^β Newtonian potential ∫ ∂_axis Γ(x-y) f(y) dy at every node.
SampledField newtonian_gradient(const SampledField& f, int axis);

}  // namespace morreylab
