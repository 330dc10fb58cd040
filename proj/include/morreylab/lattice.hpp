#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "morreylab/grid.hpp"

namespace morreylab {

/// Discrete linear convolution over the lattice of a grid:
///   out_i = Σ_j K(i - j) v_j,  i, j masked cells,
/// where K is indexed by lattice offsets. Zero-padded FFTs (FFTW) of twice
/// the lattice extent, so there is no wrap-around.
class LatticeConvolver {
public:
  /// K(di, dj); dj is always 0 in 1D.
  using OffsetKernel = std::function<double(int, int)>;

  struct Spectrum {
    std::shared_ptr<std::complex<double>> data;
    std::size_t size = 0;
  };

  explicit LatticeConvolver(std::shared_ptr<const Grid> grid);

  const Grid& grid() const { return *grid_; }
  /// Transform length per axis (2 x extent).
  int length() const { return len_; }

  Spectrum transform_kernel(const OffsetKernel& k) const;
  Spectrum transform_field(std::span<const double> values) const;
  /// Values on the masked cells of the convolution of a transformed field
  /// with a transformed kernel.
  std::vector<double> apply(const Spectrum& field, const Spectrum& kernel) const;
  std::vector<double> convolve(std::span<const double> values, const OffsetKernel& k) const;

private:
  Spectrum forward(std::vector<double>& box) const;

  std::shared_ptr<const Grid> grid_;
  int len_;
  std::size_t real_, complex_;
};

/// ∫ ln|w| dw over the unit square centred at (ox, oy) (lattice units).
double cell_log_integral(double ox, double oy);
/// ∫ w_axis / |w|^2 dw over the unit square centred at (ox, oy).
double cell_grad_log_integral(double ox, double oy, int axis);

/// Gauss–Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> x, w;
};
GaussRule gauss_legendre01(int points);

/// Quadrature nodes for ∫ over the square of side h centred at c of a
/// function singular at most like 1/|y - x|. When x lies in the square it is
/// split into rectangles at x and each triangle half is Duffy-mapped so the
/// corner singularity is removed; otherwise tensor Gauss. `points` is 3, 6
/// or 8 per direction.
void singular_cell_quadrature(const Point& c, double h, const Point& x, int points,
                              const std::function<void(const Point& y, double weight)>& visit);

}  // namespace morreylab
