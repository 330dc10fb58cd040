#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "morreylab/grid.hpp"
#include "morreylab/weights.hpp"

namespace morreylab {

/// A named test function on a domain.
struct CorpusFunction {
  std::string id;
  std::string family;
  std::function<double(const Point&)> fn;

  SampledField sample(std::shared_ptr<const Grid> grid) const { return SampledField::sample(std::move(grid), fn); }
};

/// Default corpus of `size` functions (at least the fixed families):
/// constants, coordinate monomials, mollified ball indicators at three
/// positions, sin(kπx) products for k = 1, 3, 7, two rough indicators, then
/// seeded random trigonometric polynomials (5 terms each) up to `size`.
/// A larger size extends a smaller one: the first members coincide.
std::vector<CorpusFunction> default_corpus(const Domain& domain, std::uint64_t seed, std::size_t size = 20);

/// Functions concentrated at x0 for probing an out-of-class weight
/// |x - x0|^γ in L_p: the truncated dual weight |x - x0|^{-γ/(p-1)} and
/// indicators of small balls around x0.
std::vector<CorpusFunction> concentration_corpus(const Domain& domain, const Point& x0, double gamma, double p);

/// A C^∞ step: 1 for t <= -1/2, 0 for t >= 1/2.
double smooth_step(double t);

}  // namespace morreylab
