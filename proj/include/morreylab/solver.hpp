#pragma once

#include "morreylab/greens.hpp"
#include "morreylab/grid.hpp"
#include "morreylab/spaces.hpp"

namespace morreylab {

enum class SolverMethod {
  Auto,   // fastest available path
  Direct  // node-by-node quadrature, O(cells^2); reference for the fast paths
};

/// u = ∫ G_m(·,y) f(y) dy at every node with its jet D^s u, |s| <= 2m.
/// f is taken piecewise constant on cells.
///   Interval: exact cell integrals of the piecewise-polynomial kernel.
///   Disk, m = 1: Γ part by exact cell integrals of ln|z| and ∂ ln|z|
///     (FFT convolution), h part by the midpoint rule (summed as a power
///     series in the fast path).
///   Disk, m = 2: direct; Duffy-Gauss on the cell holding x and its
///     neighbours, midpoint elsewhere (small grids only).
/// Orders up to 2m-1 come from the quadrature; order 2m by central
/// differences of the order 2m-1 fields (one-sided at the edge of the mask).
/// Throws "no Green function" for an unsupported (domain, m).
Jet solve_dirichlet(const Domain& domain, int m, const SampledField& f, SolverMethod method = SolverMethod::Auto);

/// Derivative of a field along an axis: central differences, one-sided
/// where a neighbour is outside the mask, 0 for an isolated cell.
SampledField difference(const SampledField& u, int axis);

/// max |(-Δ)^m u - f| over nodes at least 2m cells inside ∂Ω, with (-Δ)^m
/// the m-fold 3-point (1D) or 5-point (2D) Laplacian applied to u = jet[0].
double residual_check(const Domain& domain, int m, const Jet& jet, const SampledField& f);

}  // namespace morreylab
