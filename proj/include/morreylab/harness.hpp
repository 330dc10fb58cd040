#pragma once

#include <functional>
#include <string>
#include <vector>

#include "morreylab/config.hpp"
#include "morreylab/greens.hpp"
#include "morreylab/report.hpp"

namespace morreylab {

/// Names accepted by run_suite, in run order.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);
/// Throws ConfigError("unknown suite ...") listing the valid names.
SuiteReport run_suite(const std::string& name, const ExperimentConfig& config);

// Exact solutions at two resolutions: relative errors and timings.
SuiteReport suite_solver(const ExperimentConfig& c);
// Inverse-weight-measure Morrey norm against the global weighted norm.
SuiteReport suite_collapse(const ExperimentConfig& c);
// A_p constants: constant weight, the sharp |x|^{1/2} case, out-of-class growth.
SuiteReport suite_ap(const ExperimentConfig& c);
SuiteReport suite_hardy(const ExperimentConfig& c);
// φ-condition closed form for power laws with w ≡ 1.
SuiteReport suite_condition(const ExperimentConfig& c);
SuiteReport suite_kernels(const ExperimentConfig& c);
SuiteReport suite_identity(const ExperimentConfig& c);
// M and K* between Morrey spaces, the local ball inequality, the negative control.
SuiteReport suite_operator_boundedness(const ExperimentConfig& c);
SuiteReport suite_apriori(const ExperimentConfig& c);
SuiteReport suite_lemma22(const ExperimentConfig& c);
SuiteReport suite_lemma24(const ExperimentConfig& c);
SuiteReport suite_pointwise(const ExperimentConfig& c);

/// Runs body(0..n-1) on up to `jobs` threads (0: hardware concurrency).
/// Callers write results into per-index slots, so output order is fixed.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

/// For each f: v(x) = Σ_{y : |x-y| > d(x)} |D^α G(x,y)| |f(y)| |cell|, the
/// inner sum of the off-diagonal double integral.
std::vector<SampledField> offdiagonal_action(const GreenFunction& g, const MultiIndex& alpha,
                                             const std::vector<SampledField>& fs);

struct OffdiagonalSides {
  double lhs = 0.0;   // Σ_x Σ_{|x-y|>d(x)} |D^α G(x,y) f(y) g(x)| |cell|^2
  double rhsF = 0.0;  // ∫ Mf |g|
  double rhsG = 0.0;  // ∫ Mg |f|
};

OffdiagonalSides offdiagonal_sides(const GreenFunction& g, const MultiIndex& alpha, const SampledField& f,
                                   const SampledField& h, const std::vector<double>& radii);

}  // namespace morreylab
