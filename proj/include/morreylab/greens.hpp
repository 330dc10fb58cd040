#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morreylab/grid.hpp"
#include "morreylab/taylor.hpp"

namespace morreylab {

/// Derivatives up to total order 4 (enough for 2m with m <= 2).
using KernelJet = Taylor2<4>;

/// Polyharmonic fundamental solution of (-Δ)^m in R^n, n in {1, 2}:
/// c|z|^{2m-n}, or c|z|^{2m-n} log|z| when 2m-n is even and nonnegative.
class FundamentalSolution {
public:
  FundamentalSolution(int n, int m);
  int n() const { return n_; }
  int m() const { return m_; }
  double constant() const { return c_; }
  bool logarithmic() const { return log_; }

  double operator()(const Point& z) const;
  /// Jet in z about z != 0.
  KernelJet jet(const Point& z) const;
  double derivative(const Point& z, const MultiIndex& a) const;

private:
  int n_, m_;
  double c_;
  bool log_;
};

/// Green function of (-Δ)^m with Dirichlet conditions on an interval
/// (m = 1, 2) or a disk (m = 1, 2), split as G = Γ + h.
class GreenFunction {
public:
  /// Throws "no Green function" for unsupported (domain, m).
  GreenFunction(const Domain& domain, int m);

  const Domain& domain() const { return domain_; }
  int m() const { return m_; }
  int dim() const { return domain_.dim(); }
  const FundamentalSolution& fundamental() const { return gamma_; }

  /// G_m(x, y); throws "on-diagonal" when x == y.
  double operator()(const Point& x, const Point& y) const;
  /// Jet of G_m(·, y) about x (x-derivatives).
  KernelJet jet(const Point& x, const Point& y) const;
  double derivative(const Point& x, const Point& y, const MultiIndex& a) const;

  /// Regular part h = G - Γ, smooth across the diagonal.
  double regular(const Point& x, const Point& y) const;
  KernelJet regular_jet(const Point& x, const Point& y) const;

private:
  KernelJet interval_jet(const Point& x, const Point& y) const;
  KernelJet disk_regular_jet(const Point& x, const Point& y) const;

  Domain domain_;
  int m_;
  FundamentalSolution gamma_;
};

/// Boundary kernel K_j(x, Q), Q on ∂Ω. Implemented: disk, m = 1, j = 0.
class PoissonKernel {
public:
  PoissonKernel(const Domain& domain, int m, int j);
  double operator()(const Point& x, const Point& q) const;
  /// ∫_{∂Ω} K(x, Q) ds(Q) by the trapezoid rule on `points` boundary nodes.
  double boundary_integral(const Point& x, int points = 4096) const;

private:
  Domain domain_;
};

struct KernelPair {
  Point x{}, y{};
};

/// Deterministic low-discrepancy pair sample: x with log-uniform boundary
/// distance (down to 1e-6 d), y at a log-uniform separation in
/// [minSeparation, d]; every other pair has separation at most d(x).
/// Prefixes of the sample are samples.
std::vector<KernelPair> sample_kernel_pairs(const Domain& domain, std::size_t count, double minSeparation,
                                            std::uint64_t seed);

enum class BoundRegime {
  Bounded,      // |D^α G| <= C, |α| < 2m-n
  Logarithmic,  // C log(2d/|x-y|), |α| = 2m-n
  Power,        // C |x-y|^{2m-n-|α|}, |α| > 2m-n
  TopOrder,     // C |x-y|^{-n} min{1, d(y)/|x-y|}^m, |α| = 2m
  TopOrderDx,   // the same with d(x), reported for information
  RegularPart   // |D^α h| <= C d(x)^{2m-n-|α|} for |x-y| <= d(x), |α| > 2m-n+1
};

std::string regime_name(BoundRegime r);
/// Regimes applicable to a derivative order; empty when none applies.
std::vector<BoundRegime> applicable_regimes(int n, int m, int order);

struct RegimeFit {
  BoundRegime regime{};
  MultiIndex alpha{};
  double constant = 0.0;  // max over pairs of |LHS| / shape
  std::size_t pairsUsed = 0;
  KernelPair attaining{};
};

/// Fitted constants for each α in alphas and each applicable regime;
/// throws "regime not applicable" if some α has no regime. With a positive
/// refineSeparation the best sampled pair of every fit is improved by a
/// compass search that keeps |x-y| at least that separation and both points
/// at least 1e-6 d inside.
std::vector<RegimeFit> verify_kernel_bounds(const GreenFunction& g, const std::vector<KernelPair>& pairs,
                                            const std::vector<MultiIndex>& alphas, double refineSeparation = 0.0);

struct PoissonFit {
  double constant = 0.0;  // max |K_0(x,Q)| |x-Q|^{n+m-1} / d(x)
  double normalizationError = 0.0;  // max |∫K_0 ds - 1| over the tested x
  Point attainingX{}, attainingQ{};
};

/// Samples interior points (radial and angular strata) against boundary points.
PoissonFit verify_poisson_bounds(const Domain& domain, int m, std::size_t samples, std::uint64_t seed);

}  // namespace morreylab
