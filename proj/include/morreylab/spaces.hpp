#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morreylab/grid.hpp"
#include "morreylab/weights.hpp"

namespace morreylab {

/// The φ(x,r) families used by the Morrey norms and the φ-conditions.
/// φ depends on x only through the weight measure of the ball, which the
/// caller supplies (w(Ω(x,r)) inside norms, w(B(x,r)) inside the conditions).
class PhiFunction {
public:
  enum class Kind { PowerLaw, WeightMeasure, InverseWeightMeasure, Custom };

  /// r^{(λ-n)/p}
  static PhiFunction power_law(double lambda, double p, int n);
  /// w(B)^{(k-1)/p}
  static PhiFunction weight_measure(double k, double p, Weight w);
  /// w(B)^{-1/p}
  static PhiFunction inverse_weight_measure(double p, Weight w);
  /// Tabulated in r, log-log interpolated, constant extrapolation.
  static PhiFunction custom(std::vector<double> radii, std::vector<double> values);

  Kind kind() const { return kind_; }
  double operator()(double r, double ballWeightMeasure) const;
  /// The weight whose ball measure enters φ, if any.
  const std::optional<Weight>& weight() const { return weight_; }
  double lambda() const { return lambda_; }
  double k() const { return k_; }
  double p() const { return p_; }
  PhiFunction scaled(double c) const;
  std::string describe() const;

private:
  Kind kind_ = Kind::PowerLaw;
  double lambda_ = 0.0, k_ = 0.0, p_ = 1.0;
  int n_ = 1;
  double scale_ = 1.0;
  std::optional<Weight> weight_;
  std::vector<double> logR_, logV_;
};

/// (∫_{Ω∩region} |f|^p w)^{1/p}.
double lp_weighted_norm(const SampledField& f, const Weight& w, double p, const Ball& region);

/// sup_t t·w({|f|>t} ∩ region)^{1/p}, exact over the discrete level sets.
double weak_lp_weighted_norm(const SampledField& f, const Weight& w, double p, const Ball& region);

/// Which ball the w^{-1/p} prefactor of the Ω-restricted Morrey norm measures.
enum class Prefactor {
  Intersected,  // w(Ω(x,r)), the default
  FullBall      // w(B(x,r)) over R^n
};

struct MorreyResult {
  double value = 0.0;
  Ball attainingBall{};
};

/// Morrey-type norms of many fields over one sweep, one weight and one p.
/// Per-ball weight measures and the sweep binning are computed once.
class MorreyEvaluator {
public:
  MorreyEvaluator(std::shared_ptr<const Grid> grid, std::vector<Ball> sweep, Weight w, double p,
                  Prefactor prefactor = Prefactor::Intersected);

  const std::vector<Ball>& sweep() const { return index_.balls(); }
  double p() const { return p_; }
  const Weight& weight() const { return w_; }
  /// w(Ω(x,r)) (or w(B(x,r))) per ball.
  const std::vector<double>& ball_weight() const { return ballWeight_; }
  const std::vector<double>& cell_mass() const { return mass_; }

  /// ‖f‖_{L_{p,w}(Ω(x,r))} (or the weak norm) for every ball.
  std::vector<double> local_norms(const SampledField& f, bool weak = false) const;
  /// sup over the sweep of φ^{-1} w(·)^{-1/p} times the given local norms.
  MorreyResult reduce(const std::vector<double>& localNorms, const PhiFunction& phi) const;
  MorreyResult norm(const SampledField& f, const PhiFunction& phi, bool weak = false) const;

  /// Ball measures of an arbitrary weight, matching the prefactor choice.
  std::vector<double> ball_measures_of(const Weight& v) const;

private:
  std::shared_ptr<const Grid> grid_;
  SweepIndex index_;
  Weight w_;
  double p_;
  Prefactor prefactor_;
  std::vector<double> mass_;
  std::vector<double> ballWeight_;
  mutable std::map<std::string, std::vector<double>> phiMeasures_;
};

MorreyResult morrey_norm(const SampledField& f, const Weight& w, const PhiFunction& phi, double p,
                         const std::vector<Ball>& sweep, bool weak = false,
                         Prefactor prefactor = Prefactor::Intersected);

/// A field together with its derivatives D^s u, keyed by multi-index.
using Jet = std::map<MultiIndex, SampledField>;

/// Σ_{|s|≤m} ‖D^s u‖_{M_{p,φ}(Ω,w)}; throws "incomplete jet" if a derivative is missing.
double sobolev_morrey_norm(const Jet& jet, int m, const Weight& w, const PhiFunction& phi, double p,
                           const std::vector<Ball>& sweep);
double sobolev_morrey_norm(const Jet& jet, int m, const MorreyEvaluator& eval, const PhiFunction& phi);

struct ConditionOptions {
  /// Ess inf samples per unit of ln s, on one grid shared by every t.
  int essInfPoints = 16;
  /// Relative change between essInfPoints and twice as many that flags the row.
  double gridTolerance = 0.01;
  /// Relative change between upperLimit and upperLimit/10 that flags the row.
  double truncationTolerance = 0.01;
  /// Log-t quadrature panels per unit of ln t (8-point Gauss each).
  double panelsPerLogUnit = 4.0;
};

struct ConditionResult {
  double constant = 0.0;  // max over r of LHS(r)/φ2(x,r)
  double attainingRadius = 0.0;
  double constantDoubledGrid = 0.0;
  double constantShortLimit = 0.0;  // with upperLimit/10
  double truncationSensitivity = 0.0;
  bool gridSensitive = false;
  bool truncationSensitive = false;
};

/// Smallest C(x) with ∫_r^U [ess inf_{t<s<U} φ1(x,s) w(B(x,s))^{1/p}] w(B(x,t))^{-1/p} dt/t ≤ C φ2(x,r)
/// over the r grid. Ball measures are over R^n. Throws "divergent condition"
/// when the integrand is not finite.
ConditionResult check_phi_condition(const PhiFunction& phi1, const PhiFunction& phi2, const Weight& w, double p,
                                    const Point& x, int dim, const std::vector<double>& rGrid, double upperLimit,
                                    const ConditionOptions& options = {});

}  // namespace morreylab
