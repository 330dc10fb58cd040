#pragma once

#include <string>
#include <vector>

#include "morreylab/grid.hpp"

namespace morreylab {

/// Analytic weight: a positive constant times a product of power factors
/// |x - x_k|^gamma_k. Constant, power and product weights are the special
/// cases with zero, one and several factors.
class Weight {
public:
  struct Factor {
    Point center{};
    double gamma = 0.0;
  };
  enum class Kind { Constant, Power, Product };

  Weight() = default;
  static Weight constant(double c);
  /// Rejects gamma <= -dim (not locally integrable).
  static Weight power(Point center, double gamma, int dim);
  static Weight product(const Weight& a, const Weight& b);

  Kind kind() const;
  double scale() const { return scale_; }
  const std::vector<Factor>& factors() const { return factors_; }
  int dim() const { return dim_; }

  double operator()(const Point& x) const;
  /// w^e. Unchecked: the result may fail local integrability (the dual of an
  /// out-of-class weight does).
  Weight pow(double e) const;
  Weight scaled(double c) const;
  bool locally_integrable(int dim) const;

  /// Integral over the cell of side h centered at c: exact for a single
  /// factor in 1D, 8x oversampled midpoint per axis otherwise. A cell touching
  /// a non-integrable singularity falls back to the midpoint value (a
  /// regularization at the grid scale).
  double cell_integral(const Point& c, double h, int dim) const;
  /// w(B(x,r)) over the full ball of R^dim: closed form for constants and for
  /// one factor in 1D, one-dimensional angular quadrature for one factor in
  /// 2D, adaptive quadrature otherwise.
  double ball_measure(const Point& x, double r, int dim) const;

  std::string describe() const;

private:
  double scale_ = 1.0;
  std::vector<Factor> factors_;
  int dim_ = 0;
};

/// Per-cell masses of w on the masked cells of the grid.
std::vector<double> cell_masses(const Weight& w, const Grid& grid);

/// w(region ∩ Ω) from exact or oversampled cell integrals.
double weight_measure(const Weight& w, const Ball& region, const Grid& grid);

struct ApEstimate {
  double p = 2.0;
  double value = 1.0;
  Ball attainingBall{};
  /// The dual weight w^{-1/(p-1)} is not locally integrable and was
  /// regularized at the grid scale; the value then depends on h.
  bool regularized = false;
  std::size_t ballsUsed = 0;
};

/// Discrete A_p constant: max over the balls of the sweep that lie inside Ω
/// of (avg w)(avg w^{-1/(p-1)})^{p-1}; the A_1 form (avg w)·max w^{-1} for
/// p = 1, with the ess sup taken over member nodes. Ties keep the first ball.
ApEstimate ap_constant(const Weight& w, double p, std::shared_ptr<const Grid> grid, const std::vector<Ball>& sweep);

/// ball_sweep plus balls centered at (or, for boundary points, touching from
/// inside) every singular center of w.
std::vector<Ball> ap_sweep(const Grid& grid, const Weight& w, int centersPerAxis, int radiiCount);

struct ApMembership {
  bool member = false;
  double gammaLower = 0.0;  // exclusive
  double gammaUpper = 0.0;  // exclusive for p > 1, inclusive for p = 1
  ApEstimate estimate;
};

/// Power-weight criterion -n < gamma < n(p-1) (A_1: -n < gamma <= 0) with the
/// numeric constant alongside for cross-validation.
ApMembership ap_membership(const Weight& w, double p, std::shared_ptr<const Grid> grid,
                           const std::vector<Ball>& sweep);

}  // namespace morreylab
