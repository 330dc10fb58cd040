#include "morreylab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "morreylab/corpus.hpp"
#include "morreylab/hardy.hpp"
#include "morreylab/operators.hpp"
#include "morreylab/solver.hpp"
#include "morreylab/spaces.hpp"
#include "morreylab/weights.hpp"

namespace morreylab {

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  std::size_t t = jobs > 0 ? static_cast<std::size_t>(jobs) : std::max(1u, std::thread::hardware_concurrency());
  t = std::min(t, n);
  if (t <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < t; ++k)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next++;
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(m);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (std::thread& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kPi = 3.14159265358979323846;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::shared_ptr<const Grid> make_grid(const Domain& d, int n) { return std::make_shared<const Grid>(d, n); }

std::string num(double v) { return format_number(v); }

std::string join(std::initializer_list<std::string> parts) {
  std::string s;
  for (const std::string& p : parts) s += (s.empty() ? "" : "/") + p;
  return s;
}

std::string alpha_str(const MultiIndex& a) { return "a" + std::to_string(a[0]) + std::to_string(a[1]); }

std::vector<SampledField> sample_all(const std::vector<CorpusFunction>& fs, const std::shared_ptr<const Grid>& g) {
  std::vector<SampledField> out;
  out.reserve(fs.size());
  for (const CorpusFunction& f : fs) out.push_back(f.sample(g));
  return out;
}

std::vector<Jet> solve_all(const Domain& d, int m, const std::vector<SampledField>& fs, int jobs) {
  std::vector<Jet> out(fs.size());
  parallel_for(fs.size(), jobs, [&](std::size_t q) { out[q] = solve_dirichlet(d, m, fs[q]); });
  return out;
}

double int_abs_product(const SampledField& a, const SampledField& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k]) * std::abs(b[k]);
  return s * a.grid().cell_measure();
}

Ball covering_ball(const Domain& d) { return {d.middle(), d.diameter()}; }

// Largest constant per grid size for one group of rows.
struct Fit {
  std::vector<std::pair<int, double>> trend;

  void add(int n, double r) {
    if (trend.empty() || trend.back().first != n) trend.push_back({n, 0.0});
    if (r > trend.back().second || std::isnan(r)) trend.back().second = r;
  }
  std::vector<double> values() const {
    std::vector<double> v;
    for (const auto& t : trend) v.push_back(t.second);
    return v;
  }
};
using Fits = std::map<std::string, Fit>;

struct Trend {
  std::map<int, double> byN;
  double finest = 0.0;  // max over groups of the value at each group's finest N
  void add(const Fit& f) {
    for (const auto& [n, c] : f.trend) byN[n] = std::max(byN[n], c);
    if (!f.trend.empty()) finest = std::max(finest, f.trend.back().second);
  }
  void store(SuiteReport& rep) const {
    rep.trend.assign(byN.begin(), byN.end());
    rep.fittedConstant = finest;
  }
};

// One check per family of groups: every group's sup-constant must move by
// at most tol between consecutive refinements.
void judge(SuiteReport& rep, Trend* trend, const std::string& label, const Fits& fits, double tol,
           bool informational = false) {
  bool ok = true;
  double worst = 0.0;
  std::string worstId, worstTrend;
  std::vector<std::string> diverging;
  for (const auto& [id, fit] : fits) {
    const RefinementVerdict v = refinement_verdict(fit.values(), tol);
    if (!v.stable) ok = false;
    if (v.diverging) diverging.push_back(id + " [" + trend_string(fit.trend) + "]");
    if (v.maxRelativeChange >= worst) {
      worst = v.maxRelativeChange;
      worstId = id;
      worstTrend = trend_string(fit.trend);
    }
    if (trend && !informational) trend->add(fit);
  }
  std::ostringstream d;
  d << fits.size() << " groups; largest refinement change " << num(worst);
  if (!worstId.empty()) d << " in " << worstId << " [" << worstTrend << "]";
  if (!diverging.empty()) {
    d << "; diverging:";
    for (const std::string& s : diverging) d << ' ' << s;
  }
  rep.check(label + " stable within " + num(tol * 100) + "%", ok && !fits.empty(), d.str(), informational);
}

bool ap_member(const Weight& w, double p, const std::shared_ptr<const Grid>& g) {
  return ap_membership(w, p, g, ap_sweep(*g, w, 6, 8)).member;
}

struct Gate {
  bool ok = true;
  double constant = 0.0;
};

// φ-condition with φ1 = φ2 at the domain middle and at the weight's anchor
Gate condition_gate(const PhiFunction& phi, const Weight& w, double p, const Domain& dom, const WeightSpec& ws) {
  std::vector<Point> xs{dom.middle()};
  if (!ws.constant && ws.at != "center") xs.push_back(ws.anchor(dom));
  const double d = dom.diameter();
  const std::vector<double> rGrid = log_space(1e-3 * d, d, 16);
  Gate g;
  try {
    for (const Point& x : xs) {
      const ConditionResult r = check_phi_condition(phi, phi, w, p, x, dom.dim(), rGrid, d);
      g.constant = std::max(g.constant, r.constant);
    }
    g.ok = std::isfinite(g.constant);
  } catch (const Error&) {
    g.ok = false;
  }
  return g;
}

ReportRow make_row(std::string id, int n, double lhs, double rhs, std::vector<std::string> flags = {}) {
  ReportRow r{std::move(id), n, lhs, rhs, 0.0, std::move(flags)};
  if (rhs == 0.0) {
    r.ratio = lhs == 0.0 ? 0.0 : INFINITY;
    r.flags.push_back(lhs == 0.0 ? "vacuous" : "zero-rhs");
  } else {
    r.ratio = lhs / rhs;
  }
  return r;
}

bool has_green(const Domain& d, int m) {
  try {
    GreenFunction g(d, m);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Distinct centers of a sweep, in order of first appearance.
std::vector<Point> sweep_centers(const std::vector<Ball>& sweep) {
  std::vector<Point> c;
  for (const Ball& b : sweep)
    if (c.empty() || c.back() != b.center) c.push_back(b.center);
  return c;
}

}  // namespace

// ---------------------------------------------------------------- solver

SuiteReport suite_solver(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "solver";
  const SuiteSpec& s = c.suite("solver");
  const double tolCoarse = s.param("tolerance_coarse"), tolFine = s.param("tolerance_fine");
  const double limit = s.param("seconds_limit");
  rep.tolerance = tolFine;
  Trend trend;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    std::function<double(const Point&)> exact;
    if (d.kind() == Domain::Kind::Interval && cs.m == 1)
      exact = [a = d.a(), b = d.b()](const Point& x) { return (x[0] - a) * (b - x[0]) / 2; };
    else if (d.kind() == Domain::Kind::Interval && cs.m == 2)
      exact = [a = d.a(), b = d.b()](const Point& x) { return std::pow((x[0] - a) * (b - x[0]), 2) / 24; };
    else if (d.kind() == Domain::Kind::Disk && cs.m == 1)
      exact = [c0 = d.center(), R = d.radius()](const Point& x) {
        return (R * R - std::pow(distance(x, c0), 2)) / 4;
      };
    else {
      rep.notes.push_back(cs.id + ": no closed-form solution for f = 1; skipped");
      continue;
    }
    Fit fit;
    for (std::size_t k = 0; k < cs.grids.size(); ++k) {
      const int N = cs.grids[k];
      auto g = make_grid(d, N);
      const SampledField f = SampledField::sample(g, [](const Point&) { return 1.0; });
      const auto t0 = Clock::now();
      const Jet jet = solve_dirichlet(d, cs.m, f);
      const double secs = since(t0);
      const SampledField u = SampledField::sample(g, exact);
      const double err = (jet.at({0, 0}) - u).max_abs() / u.max_abs();
      const double tol = k == 0 ? tolCoarse : tolFine;
      rep.rows.push_back(make_row(join({cs.id, "relative_error"}), N, err, tol));
      rep.check(cs.id + " N=" + std::to_string(N) + " relative error < " + num(tol), err < tol, "error " + num(err));
      rep.check(cs.id + " N=" + std::to_string(N) + " runtime < " + num(limit) + " s", secs < limit,
                num(std::round(secs * 100) / 100) + " s");
      const double res = residual_check(d, cs.m, jet, f);
      rep.rows.push_back(make_row(join({cs.id, "residual"}), N, res, 0.05 * f.max_abs()));
      rep.check(cs.id + " N=" + std::to_string(N) + " residual < 5% of max|f|", res < 0.05, "residual " + num(res),
                true);
      fit.add(N, err);
    }
    trend.add(fit);
  }
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- collapse

SuiteReport suite_collapse(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "collapse";
  const SuiteSpec& s = c.suite("collapse");
  const double tol = s.param("tolerance");
  rep.tolerance = tol;
  Trend trend;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    const auto corpus = default_corpus(d, c.seed, c.corpusSize);
    double worst = 0.0;
    std::size_t count = 0;
    Fit fit;
    for (int N : cs.grids) {
      auto g = make_grid(d, N);
      const auto sweep = ball_sweep(*g, c.centers(d.dim()), c.radii);
      const auto fields = sample_all(corpus, g);
      for (double p : cs.p)
        for (const WeightSpec& ws : c.weights) {
          const Weight w = ws.make(d);
          const MorreyEvaluator E(g, sweep, w, p);
          const PhiFunction phi = PhiFunction::inverse_weight_measure(p, w);
          for (std::size_t q = 0; q < fields.size(); ++q) {
            const double morrey = E.norm(fields[q], phi).value;
            const double global = lp_weighted_norm(fields[q], w, p, covering_ball(d));
            const double rel = global == 0.0 ? (morrey == 0.0 ? 0.0 : INFINITY) : std::abs(morrey - global) / global;
            worst = std::max(worst, rel);
            ++count;
            rep.rows.push_back(make_row(join({cs.id, ws.id, "p=" + num(p), corpus[q].id}), N, morrey, global));
          }
        }
      fit.add(N, worst);
    }
    trend.add(fit);
    rep.check(cs.id + " Morrey norm equals global norm to " + num(tol), worst <= tol,
              std::to_string(count) + " cases; max relative difference " + num(worst));
  }
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- A_p

SuiteReport suite_ap(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "ap";
  const auto t0 = Clock::now();
  const SuiteSpec& s = c.suite("ap");
  const double tol = s.param("tolerance"), growth = s.param("growth");
  const double pSharp = s.param("p_sharp"), gSharp = s.param("gamma_sharp");
  rep.tolerance = tol;
  Trend trend;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    const int n = d.dim();
    bool constantExact = true;
    std::map<double, Fit> negative;
    Fit sharp;
    for (int N : cs.grids) {
      auto g = make_grid(d, N);
      const auto sweep = ball_sweep(*g, c.centers(n), c.radii);
      for (double p : cs.p) {
        const double one = ap_constant(Weight::constant(1.0), p, g, sweep).value;
        constantExact = constantExact && one == 1.0;
        rep.rows.push_back(make_row(join({cs.id, "one", "p=" + num(p)}), N, one, 1.0));

        for (const WeightSpec& ws : c.weights) {
          if (ws.constant) continue;
          const Weight w = ws.make(d);
          const ApMembership m = ap_membership(w, p, g, ap_sweep(*g, w, 8, 12));
          std::vector<std::string> flags{m.member ? "member" : "out-of-class"};
          if (m.estimate.regularized) flags.push_back("regularized");
          rep.rows.push_back(make_row(join({cs.id, ws.id, "p=" + num(p)}), N, m.estimate.value, 1.0, flags));
        }

        // out-of-class power weight: the estimate must blow up under refinement
        const double gamma = n * (p - 1.0) + 0.5;
        const Weight bad = Weight::power(d.middle(), gamma, n);
        const ApEstimate e = ap_constant(bad, p, g, ap_sweep(*g, bad, 8, 24));
        rep.rows.push_back(make_row(join({cs.id, "negative_gamma=" + num(gamma), "p=" + num(p)}), N, e.value, 1.0,
                                    {"out-of-class"}));
        negative[p].add(N, e.value);
      }

      if (n == 1 && std::find(cs.p.begin(), cs.p.end(), pSharp) != cs.p.end()) {
        const Weight w = Weight::power(d.middle(), gSharp, 1);
        const double expect = (1.0 / (1.0 + gSharp)) * std::pow(1.0 / (1.0 - gSharp / (pSharp - 1.0)), pSharp - 1.0);
        std::vector<Ball> origin;
        for (double r : log_space(g->spacing(), 0.5 * d.diameter(), 20)) origin.push_back({d.middle(), r});
        std::vector<Ball> all = ap_sweep(*g, w, 8, 24);
        all.insert(all.end(), origin.begin(), origin.end());
        const double atOrigin = ap_constant(w, pSharp, g, origin).value;
        const double overall = ap_constant(w, pSharp, g, all).value;
        sharp.add(N, atOrigin);
        const std::string tag = "N=" + std::to_string(N);
        rep.rows.push_back(make_row(join({cs.id, "sharp_origin"}), N, atOrigin, expect));
        rep.rows.push_back(make_row(join({cs.id, "sharp_overall"}), N, overall, expect));
        rep.check(cs.id + " " + tag + " centered balls within " + num(tol * 100) + "% of " + num(expect),
                  std::abs(atOrigin - expect) / expect <= tol, "estimate " + num(atOrigin));
        rep.check(cs.id + " " + tag + " sweep maximum at least " + num(expect), overall >= expect - 1e-12,
                  "estimate " + num(overall));
      }
    }
    trend.add(sharp);  // the fitted constant is the sharp centred-ball estimate
    rep.check(cs.id + " constant weight gives exactly 1", constantExact);
    for (const auto& [p, fit] : negative) {
      if (fit.trend.size() < 2) continue;
      double minGrowth = INFINITY;
      for (std::size_t k = 1; k < fit.trend.size(); ++k)
        minGrowth = std::min(minGrowth, fit.trend[k].second / fit.trend[k - 1].second);
      rep.check(cs.id + " out-of-class gamma=" + num(n * (p - 1) + 0.5) + " p=" + num(p) + " grows at least " +
                    num(growth) + "x per refinement",
                minGrowth >= growth, "smallest growth " + num(minGrowth) + " [" + trend_string(fit.trend) + "]");
    }
  }
  const double secs = since(t0);
  rep.check("runtime under 60 s", secs < 60.0, num(std::round(secs * 100) / 100) + " s");
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- Hardy

SuiteReport suite_hardy(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "hardy";
  const auto t0 = Clock::now();
  const SuiteSpec& s = c.suite("hardy");
  const double tol = s.param("tolerance"), sharp = s.param("sharpness"), d = s.param("d");
  rep.tolerance = tol;

  HardySetting unit;
  unit.d = d;
  const HardyConstant B = hardy_best_constant(unit);
  std::vector<std::string> ids;
  const auto family = hardy_default_family(d, &ids);
  const HardyReport hr = hardy_verify_inequality(unit, family, ids);
  for (const HardyRow& r : hr.rows)
    rep.rows.push_back({join({"unit_weights", r.id}), 0, r.lhs, r.rhs, r.ratio,
                        r.holds ? std::vector<std::string>{} : std::vector<std::string>{"violated"}});
  rep.check("best constant for unit weights is 1 to " + num(tol), std::abs(B.value - 1.0) <= tol,
            "B = " + num(B.value));
  rep.check("inequality holds with C = B on the " + std::to_string(family.size()) + "-member family",
            hr.allHold && family.size() >= 50);
  rep.check("family max ratio at least " + num(sharp) + " B", hr.maxRatio >= sharp * B.value,
            "max ratio " + num(hr.maxRatio));
  rep.fittedConstant = B.value;
  rep.trend = {{0, hr.maxRatio}};

  // w(t) = t: B = sup_r ∫_r^d t dt = d^2/2
  HardySetting lin = unit;
  lin.w = [](double t) { return t; };
  const HardyConstant Bl = hardy_best_constant(lin);
  rep.rows.push_back(make_row("linear_w/best_constant", 0, Bl.value, d * d / 2));
  rep.check("best constant for w(t) = t is d^2/2", std::abs(Bl.value - d * d / 2) <= 1e-6 * d * d,
            "B = " + num(Bl.value), true);

  const double secs = since(t0);
  rep.check("runtime under 10 s", secs < 10.0, num(std::round(secs * 100) / 100) + " s");
  return rep;
}

// ---------------------------------------------------------------- condition

SuiteReport suite_condition(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "condition";
  const SuiteSpec& s = c.suite("condition");
  const double tol = s.param("tolerance");
  rep.tolerance = tol;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    const int n = d.dim();
    const double dia = d.diameter();
    const auto rGrid = log_space(s.param("r_min_fraction") * dia, dia, static_cast<int>(s.param("radii")));
    const double U = s.param("upper_limit_factor") * dia;
    double worst = 0.0;
    for (double p : cs.p)
      for (double frac : {0.25, 0.5, 0.75}) {
        const double lambda = frac * n;
        const auto phi = PhiFunction::power_law(lambda, p, n);
        const ConditionResult r = check_phi_condition(phi, phi, Weight::constant(1.0), p, d.middle(), n, rGrid, U);
        const double expect = p / (n - lambda);
        worst = std::max(worst, std::abs(r.constant - expect) / expect);
        std::vector<std::string> flags;
        if (r.gridSensitive) flags.push_back("grid-sensitive");
        if (r.truncationSensitive) flags.push_back("truncation-sensitive");
        rep.rows.push_back(
            make_row(join({cs.id, "power_lambda=" + num(lambda), "p=" + num(p)}), 0, r.constant, expect, flags));
      }
    rep.check(cs.id + " power-law constants within " + num(tol * 100) + "% of p/(n-lambda)", worst <= tol,
              "max relative deviation " + num(worst));

    // the configured φ and weights, for reference
    for (double p : cs.p)
      for (const WeightSpec& ws : c.weights) {
        const Weight w = ws.make(d);
        for (const PhiSpec& ps : c.phis) {
          const Gate gate = condition_gate(ps.make(n, p, w), w, p, d, ws);
          rep.rows.push_back(make_row(join({cs.id, ws.id, ps.id, "p=" + num(p)}), 0, gate.constant, 1.0,
                                      gate.ok ? std::vector<std::string>{} : std::vector<std::string>{"divergent"}));
        }
      }
  }
  rep.fittedConstant = 0.0;
  return rep;
}

// ---------------------------------------------------------------- kernels

SuiteReport suite_kernels(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "kernels";
  const auto t0 = Clock::now();
  const SuiteSpec& s = c.suite("kernels");
  const double tol = s.param("tolerance");
  const auto small = static_cast<std::size_t>(s.param("pairs_small"));
  const auto large = static_cast<std::size_t>(s.param("pairs_large"));
  rep.tolerance = tol;
  Trend trend;
  bool poissonDone = false;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    if (!has_green(d, cs.m)) {
      rep.notes.push_back(cs.id + ": no Green function; skipped");
      continue;
    }
    const GreenFunction G(d, cs.m);
    const auto alphas = multi_indices_up_to(d.dim(), 2 * cs.m);
    // key -> (N, pairs) -> constant
    std::map<std::string, std::map<std::pair<int, std::size_t>, double>> table;
    std::map<std::string, bool> info;
    for (int N : cs.grids)
      for (std::size_t count : {small, large}) {
        const double sep = d.diameter() / N;
        const auto pairs = sample_kernel_pairs(d, count, sep, c.seed);
        for (const RegimeFit& f : verify_kernel_bounds(G, pairs, alphas, sep)) {
          const std::string key = join({cs.id, regime_name(f.regime), alpha_str(f.alpha)});
          table[key][{N, count}] = f.constant;
          info[key] = f.regime == BoundRegime::TopOrderDx;
          rep.rows.push_back({join({key, "pairs=" + std::to_string(count)}), N, f.constant, 1.0, f.constant,
                              info[key] ? std::vector<std::string>{"informational"} : std::vector<std::string>{}});
        }
      }
    auto change = [](double a, double b) { return a == b ? 0.0 : std::abs(b - a) / std::max(std::abs(a), 1e-300); };
    for (bool informational : {false, true}) {
      bool ok = true, finite = true;
      double worst = 0.0;
      std::string worstKey;
      Fits fits;
      for (const auto& [key, byRun] : table) {
        if (info[key] != informational) continue;
        for (const auto& [run, C] : byRun) {
          finite = finite && std::isfinite(C);
          if (run.second == large) fits[key].add(run.first, C);
          // pair-count stability at fixed N
          if (run.second == large) {
            const double ch = change(byRun.at({run.first, small}), C);
            if (ch > worst) worst = ch, worstKey = key + " pairs at N=" + std::to_string(run.first);
            ok = ok && ch <= tol;
          }
        }
        // refinement stability at fixed pair count
        for (std::size_t count : {small, large}) {
          double prev = NAN;
          for (int N : cs.grids) {
            const double C = byRun.at({N, count});
            if (!std::isnan(prev)) {
              const double ch = change(prev, C);
              if (ch > worst) worst = ch, worstKey = key + " refinement at " + std::to_string(count) + " pairs";
              ok = ok && ch <= tol;
            }
            prev = C;
          }
        }
      }
      if (fits.empty()) continue;
      if (!informational) for (const auto& [k, f] : fits) trend.add(f);
      const std::string label = cs.id + (informational ? " d(x) top-order variant" : " kernel constants");
      rep.check(label + " finite and stable within " + num(tol * 100) + "%", ok && finite,
                "largest change " + num(worst) + (worstKey.empty() ? "" : " (" + worstKey + ")"), informational);
    }

    if (!poissonDone && d.kind() == Domain::Kind::Disk && cs.m == 1) {
      poissonDone = true;
      const PoissonFit pf =
          verify_poisson_bounds(d, 1, static_cast<std::size_t>(s.param("poisson_samples")), c.seed);
      const double bound = (1.0 / kPi) * (1.0 + s.param("poisson_tolerance"));
      rep.rows.push_back(make_row(join({cs.id, "poisson_constant"}), 0, pf.constant, 1.0 / kPi));
      rep.check(cs.id + " Poisson kernel constant at most 1/pi + " + num(s.param("poisson_tolerance") * 100) + "%",
                pf.constant <= bound, "constant " + num(pf.constant));
      rep.check(cs.id + " Poisson kernel integrates to 1", pf.normalizationError < 1e-6,
                "max error " + num(pf.normalizationError), true);
    }
  }
  const double secs = since(t0);
  const double limit = s.param("seconds_limit");
  rep.check("runtime under " + num(limit) + " s", secs < limit, num(std::round(secs * 100) / 100) + " s");
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- identity

SuiteReport suite_identity(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "identity";
  const SuiteSpec& s = c.suite("identity");
  const double tol = s.param("tolerance");
  const double R = s.param("indicator_radius"), width = s.param("mollifier_width");
  rep.tolerance = tol;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    if (d.dim() != 2) {
      rep.notes.push_back(cs.id + ": the identity check needs a disk; skipped");
      continue;
    }
    for (int N : cs.grids) {
      auto g = make_grid(d, N);
      const SampledField f = SampledField::sample(
          g, [&](const Point& x) { return smooth_step((distance(x, d.center()) - R) / width); });
      const IdentityReport main = singular_identity_check(f, {2, 0}, {1, 0}, d.center());
      const std::string tag = cs.id + " N=" + std::to_string(N);
      rep.rows.push_back({join({cs.id, "a20_b10", "center"}), N, main.lhs, main.kf + main.aClassical * main.f,
                          main.aEstimate, {}});
      rep.check(tag + " a(0) within " + num(tol * 100) + "% of -1/2",
                std::abs(main.aEstimate + 0.5) <= tol * 0.5, "estimate " + num(main.aEstimate));
      rep.check(tag + " trace identity within " + num(tol * 100) + "%", main.traceError <= tol,
                "max relative error " + num(main.traceError) + " over " + std::to_string(main.interiorNodes) +
                    " nodes; " + std::to_string(main.skippedNodes) + " near-boundary nodes skipped");
      rep.rows.push_back(make_row(join({cs.id, "a20_b10", "interior"}), N, main.maxDiscrepancy, 1.0));
      rep.fittedConstant = main.aEstimate;
      rep.trend.push_back({N, main.aEstimate});
      for (auto [a, b] : {std::pair<MultiIndex, MultiIndex>{{1, 1}, {1, 0}}, {{0, 2}, {0, 1}}}) {
        const IdentityReport r = singular_identity_check(f, a, b, d.center());
        const std::string id = join({cs.id, alpha_str(a) + "_b" + std::to_string(b[0]) + std::to_string(b[1])});
        rep.rows.push_back(make_row(id + "/interior", N, r.maxDiscrepancy, 1.0));
        rep.check(tag + " " + id + " interior discrepancy below " + num(tol * 100) + "% of max|f|",
                  r.maxDiscrepancy <= tol, "max " + num(r.maxDiscrepancy), true);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------- operator boundedness

SuiteReport suite_operator_boundedness(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "boundedness";
  const auto t0 = Clock::now();
  const SuiteSpec& s = c.suite("boundedness");
  const double tol = s.param("tolerance"), growth = s.param("growth"), negP = s.param("negative_p");
  rep.tolerance = tol;
  rep.notes.push_back(
      "local ball inequality: the outer integral runs over [2r, d] (bounded domain), not [2r, infinity)");
  Trend trend;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    const int n = d.dim();
    const double dia = d.diameter();
    const auto corpus = default_corpus(d, c.seed, c.corpusSize);
    Fits fits, marFits;
    Fit negative;
    std::map<std::string, bool> member;
    std::map<std::string, Gate> gates;

    for (std::size_t k = 0; k < cs.grids.size(); ++k) {
      const int N = cs.grids[k];
      const bool finest = k + 1 == cs.grids.size();
      auto g = make_grid(d, N);
      const auto sweep = ball_sweep(*g, c.centers(n), c.radii);
      const auto fields = sample_all(corpus, g);
      const auto radii = operator_radii(*g, c.operatorRadii);

      struct Op {
        std::string name;
        std::vector<SampledField> out, fine;
      };
      std::vector<Op> ops;
      ops.push_back({"M", maximal_fields(fields, radii), {}});
      if (n == 2)
        for (MultiIndex a : {MultiIndex{2, 0}, MultiIndex{1, 1}}) {
          const CZKernel ker(2, 1, a);
          ops.push_back({"Kstar_" + alpha_str(a), maximal_singular_fields(fields, ker, radii), {}});
        }
      // radius/ε grid doubling on the coarsest grid flags sensitive rows
      if (k == 0) {
        const auto fineRadii = operator_radii(*g, 2 * c.operatorRadii);
        ops[0].fine = maximal_fields(fields, fineRadii);
        for (std::size_t o = 1; o < ops.size(); ++o) {
          const MultiIndex a = o == 1 ? MultiIndex{2, 0} : MultiIndex{1, 1};
          ops[o].fine = maximal_singular_fields(fields, CZKernel(2, 1, a), fineRadii);
        }
      }

      // balls of the local inequality: t_j = d 2^{-j/4} down to h, about the sweep centers
      const auto centers = sweep_centers(sweep);
      std::vector<double> tj;
      for (int j = 0; dia * std::pow(2.0, -j / 4.0) >= g->spacing(); ++j) tj.push_back(dia * std::pow(2.0, -j / 4.0));
      std::vector<Ball> marBalls;
      for (const Point& x : centers)
        for (double t : tj) marBalls.push_back({x, t});
      const std::size_t J = tj.size();
      std::map<double, double> plot;

      for (double p : cs.p) {
        const bool weak = p == 1.0;
        for (const WeightSpec& ws : c.weights) {
          const Weight w = ws.make(d);
          const std::string wp = join({cs.id, ws.id, "p=" + num(p)});
          if (!member.count(wp)) member[wp] = ap_member(w, p, g);
          if (!member[wp]) {
            if (k == 0) rep.rows.push_back({wp, N, 0, 0, 0, {"out-of-class", "skipped"}});
            continue;
          }
          const MorreyEvaluator E(g, sweep, w, p);
          std::vector<std::vector<double>> localF(fields.size());
          std::vector<std::vector<std::vector<double>>> localT(ops.size(), localF), localFine(ops.size(), localF);
          parallel_for(fields.size(), c.jobs, [&](std::size_t q) {
            localF[q] = E.local_norms(fields[q]);
            for (std::size_t o = 0; o < ops.size(); ++o) {
              localT[o][q] = E.local_norms(ops[o].out[q], weak);
              if (k == 0) localFine[o][q] = E.local_norms(ops[o].fine[q], weak);
            }
          });
          for (const PhiSpec& ps : c.phis) {
            const PhiFunction phi = ps.make(n, p, w);
            const std::string key = join({wp, ps.id});
            if (!gates.count(key)) gates[key] = condition_gate(phi, w, p, d, ws);
            if (!gates[key].ok) {
              if (k == 0) rep.rows.push_back({key, N, 0, 0, 0, {"condition-divergent", "skipped"}});
              continue;
            }
            for (std::size_t o = 0; o < ops.size(); ++o)
              for (std::size_t q = 0; q < fields.size(); ++q) {
                const double rhs = E.reduce(localF[q], phi).value;
                const double lhs = E.reduce(localT[o][q], phi).value;
                std::vector<std::string> flags;
                if (weak) flags.push_back("weak-output");
                if (k == 0 && lhs > 0.0) {
                  const double alt = E.reduce(localFine[o][q], phi).value;
                  if (std::abs(alt - lhs) / lhs > 0.01) flags.push_back("grid-sensitive");
                }
                ReportRow row = make_row(join({cs.id, ops[o].name, ws.id, "p=" + num(p), ps.id, corpus[q].id}), N,
                                         lhs, rhs, flags);
                if (rhs > 0.0) fits[join({cs.id, ops[o].name, ws.id, "p=" + num(p), ps.id})].add(N, row.ratio);
                rep.rows.push_back(std::move(row));
              }
          }

          // local inequality on balls Ω(x, r), r <= d/4, against ∫_{2r}^d
          const MorreyEvaluator Em(g, marBalls, w, p);
          const std::vector<double>& bw = Em.ball_weight();
          const double step = std::log(2.0) / 4.0;
          for (std::size_t o = 0; o < ops.size(); ++o) {
            std::vector<double> best(fields.size(), 0.0);
            std::vector<std::map<double, double>> perRadius(fields.size());
            parallel_for(fields.size(), c.jobs, [&](std::size_t q) {
              const auto lf = Em.local_norms(fields[q]);
              const auto lt = Em.local_norms(ops[o].out[q], weak);
              for (std::size_t ci = 0; ci < centers.size(); ++ci) {
                const std::size_t base = ci * J;
                std::vector<double> gi(J);
                for (std::size_t j = 0; j < J; ++j)
                  gi[j] = bw[base + j] > 0.0 ? lf[base + j] * std::pow(bw[base + j], -1.0 / p) : 0.0;
                double acc = 0.0;  // trapezoid over t_0..t_{j-4}
                for (std::size_t j = 8; j < J; ++j) {
                  acc = 0.0;
                  for (std::size_t i = 0; i + 4 <= j; ++i) acc += gi[i];
                  acc -= 0.5 * (gi[0] + gi[j - 4]);
                  const double rhs = std::pow(bw[base + j], 1.0 / p) * step * acc;
                  if (!(rhs > 0.0)) continue;
                  const double ratio = lt[base + j] / rhs;
                  best[q] = std::max(best[q], ratio);
                  double& pr = perRadius[q][tj[j]];
                  pr = std::max(pr, ratio);
                }
              }
            });
            const std::string gid = join({cs.id, "local_" + ops[o].name, ws.id, "p=" + num(p)});
            for (std::size_t q = 0; q < fields.size(); ++q) {
              rep.rows.push_back({join({gid, corpus[q].id}), N, best[q], 1.0, best[q], {"local-ball"}});
              marFits[gid].add(N, best[q]);
              if (finest && o == 0 && ws.constant && p == cs.p.front())
                for (const auto& [r, v] : perRadius[q]) plot[r] = std::max(plot[r], v);
            }
          }
        }
      }
      if (finest && rep.plot.empty())
        for (const auto& [r, v] : plot) rep.plot.push_back({r, v});

      // negative control: L_p with a weight outside A_p, concentrated test functions
      if (n == 1) {
        const double gamma = n * (negP - 1.0) + 0.5;
        const Weight bad = Weight::power(d.middle(), gamma, n);
        auto probes = sample_all(concentration_corpus(d, d.middle(), gamma, negP), g);
        const auto probeM = maximal_fields(probes, radii);
        double worst = 0.0;
        for (std::size_t q = 0; q < fields.size() + probes.size(); ++q) {
          const bool isProbe = q >= fields.size();
          const SampledField& f = isProbe ? probes[q - fields.size()] : fields[q];
          const SampledField& Mf = isProbe ? probeM[q - fields.size()] : ops[0].out[q];
          const double lhs = lp_weighted_norm(Mf, bad, negP, covering_ball(d));
          const double rhs = lp_weighted_norm(f, bad, negP, covering_ball(d));
          ReportRow row = make_row(join({cs.id, "negative_gamma=" + num(gamma), "p=" + num(negP),
                                         isProbe ? "probe" + std::to_string(q - fields.size()) : corpus[q].id}),
                                   N, lhs, rhs, {"out-of-class"});
          if (rhs > 0.0) worst = std::max(worst, row.ratio);
          rep.rows.push_back(std::move(row));
        }
        negative.add(N, worst);
      }
    }
    judge(rep, &trend, cs.id + " operator norms", fits, tol);
    judge(rep, nullptr, cs.id + " local ball inequality", marFits, tol);
    if (negative.trend.size() >= 2) {
      double minGrowth = INFINITY;
      for (std::size_t k = 1; k < negative.trend.size(); ++k)
        minGrowth = std::min(minGrowth, negative.trend[k].second / negative.trend[k - 1].second);
      rep.check(cs.id + " negative control grows at least " + num(growth) + "x per refinement", minGrowth >= growth,
                "smallest growth " + num(minGrowth) + " [" + trend_string(negative.trend) + "]");
    }
  }
  const double secs = since(t0);
  const double limit = s.param("seconds_limit");
  rep.check("runtime under " + num(limit) + " s", secs < limit, num(std::round(secs * 100) / 100) + " s");
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- a priori estimate

SuiteReport suite_apriori(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "apriori";
  const auto t0 = Clock::now();
  const SuiteSpec& s = c.suite("apriori");
  const double tol = s.param("tolerance"), scale = s.param("scale"), scaleTol = s.param("scale_tolerance");
  rep.tolerance = tol;
  Trend trend;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    const int n = d.dim();
    if (!has_green(d, cs.m)) {
      rep.notes.push_back(cs.id + ": no Green function; skipped");
      continue;
    }
    const auto corpus = default_corpus(d, c.seed, 2 * c.corpusSize);
    const std::size_t S = c.corpusSize;
    Fits fits;
    double scaleDev = 0.0, doublingGrowth = 0.0;
    std::map<std::string, bool> member;
    std::map<std::string, Gate> gates;

    for (std::size_t k = 0; k < cs.grids.size(); ++k) {
      const int N = cs.grids[k];
      const bool first = k == 0, finest = k + 1 == cs.grids.size();
      auto g = make_grid(d, N);
      const auto sweep = ball_sweep(*g, c.centers(n), c.radii);
      // coarsest grid: the doubled corpus and the scaled copies as well
      std::vector<SampledField> fields;
      for (std::size_t q = 0; q < (first ? 2 * S : S); ++q) fields.push_back(corpus[q].sample(g));
      if (first)
        for (std::size_t q = 0; q < S; ++q) fields.push_back(fields[q] * scale);
      const auto jets = solve_all(d, cs.m, fields, c.jobs);
      std::map<double, double> plot;

      for (double p : cs.p)
        for (const WeightSpec& ws : c.weights) {
          const Weight w = ws.make(d);
          const std::string wp = join({cs.id, ws.id, "p=" + num(p)});
          if (!member.count(wp)) member[wp] = ap_member(w, p, g);
          if (!member[wp]) {
            if (first) rep.rows.push_back({wp, N, 0, 0, 0, {"out-of-class", "skipped"}});
            continue;
          }
          const MorreyEvaluator E(g, sweep, w, p);
          std::vector<std::vector<double>> localF(fields.size());
          std::vector<std::vector<std::vector<double>>> localJ(fields.size());
          parallel_for(fields.size(), c.jobs, [&](std::size_t q) {
            localF[q] = E.local_norms(fields[q]);
            for (const auto& [s_, u] : jets[q]) localJ[q].push_back(E.local_norms(u));
          });
          for (const PhiSpec& ps : c.phis) {
            const PhiFunction phi = ps.make(n, p, w);
            const std::string key = join({wp, ps.id});
            if (!gates.count(key)) gates[key] = condition_gate(phi, w, p, d, ws);
            if (!gates[key].ok) {
              if (first) rep.rows.push_back({key, N, 0, 0, 0, {"condition-divergent", "skipped"}});
              continue;
            }
            auto ratio_of = [&](std::size_t q, double& lhs, double& rhs) {
              rhs = E.reduce(localF[q], phi).value;
              lhs = 0.0;
              for (const auto& ln : localJ[q]) lhs += E.reduce(ln, phi).value;
              return rhs > 0.0 ? lhs / rhs : NAN;
            };
            double fitS = 0.0;
            std::vector<double> base(S, NAN);
            for (std::size_t q = 0; q < S; ++q) {
              double lhs, rhs;
              base[q] = ratio_of(q, lhs, rhs);
              ReportRow row = make_row(join({key, corpus[q].id}), N, lhs, rhs);
              if (rhs > 0.0) {
                fits[key].add(N, row.ratio);
                fitS = std::max(fitS, row.ratio);
              }
              rep.rows.push_back(std::move(row));
            }
            if (first) {
              double fit2S = fitS;
              for (std::size_t q = S; q < 2 * S; ++q) {
                double lhs, rhs;
                const double r = ratio_of(q, lhs, rhs);
                if (!std::isnan(r)) fit2S = std::max(fit2S, r);
              }
              if (fitS > 0.0) doublingGrowth = std::max(doublingGrowth, fit2S / fitS - 1.0);
              for (std::size_t q = 0; q < S; ++q) {
                double lhs, rhs;
                const double r = ratio_of(2 * S + q, lhs, rhs);
                if (!std::isnan(base[q])) scaleDev = std::max(scaleDev, std::abs(r - base[q]) / base[q]);
              }
            }
          }
          // ratio of local norms per radius, for plotting
          if (finest && ws.constant && p == cs.p.front()) {
            const auto& balls = E.sweep();
            for (std::size_t q = 0; q < S; ++q)
              for (std::size_t b = 0; b < balls.size(); ++b) {
                if (!(localF[q][b] > 0.0)) continue;
                double lhs = 0.0;
                for (const auto& ln : localJ[q]) lhs += ln[b];
                double& v = plot[balls[b].radius];
                v = std::max(v, lhs / localF[q][b]);
              }
          }
        }
      if (finest && cs.id == s.cases.front().id)
        for (const auto& [r, v] : plot) rep.plot.push_back({r, v});
    }
    judge(rep, &trend, cs.id + " a priori ratio", fits, tol);
    rep.check(cs.id + " corpus doubling raises the constant by at most " + num(tol * 100) + "%",
              doublingGrowth <= tol, "largest increase " + num(doublingGrowth));
    rep.check(cs.id + " ratio invariant under f -> " + num(scale) + " f to " + num(scaleTol), scaleDev <= scaleTol,
              "max relative change " + num(scaleDev));
  }
  const double secs = since(t0);
  const double limit = s.param("seconds_limit");
  rep.check("runtime under " + num(limit) + " s", secs < limit, num(std::round(secs * 100) / 100) + " s");
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- off-diagonal double integral

std::vector<SampledField> offdiagonal_action(const GreenFunction& G, const MultiIndex& alpha,
                                             const std::vector<SampledField>& fs) {
  if (fs.empty()) return {};
  const Grid& g = fs.front().grid();
  const std::size_t cells = g.size();
  const double A = g.cell_measure();
  std::vector<std::vector<double>> v(fs.size(), std::vector<double>(cells, 0.0));
  parallel_for(cells, 0, [&](std::size_t i) {
    const Point& x = g.node(i);
    const double dx = G.domain().boundary_distance(x);
    std::vector<double> acc(fs.size(), 0.0);
    for (std::size_t j = 0; j < cells; ++j) {
      const Point& y = g.node(j);
      if (!(distance(x, y) > dx)) continue;
      const double K = std::abs(G.derivative(x, y, alpha));
      if (K == 0.0) continue;
      for (std::size_t q = 0; q < fs.size(); ++q) acc[q] += K * std::abs(fs[q][j]);
    }
    for (std::size_t q = 0; q < fs.size(); ++q) v[q][i] = acc[q] * A;
  });
  std::vector<SampledField> out;
  for (auto& vals : v) out.emplace_back(fs.front().grid_ptr(), std::move(vals));
  return out;
}

OffdiagonalSides offdiagonal_sides(const GreenFunction& G, const MultiIndex& alpha, const SampledField& f,
                                   const SampledField& h, const std::vector<double>& radii) {
  const auto v = offdiagonal_action(G, alpha, {f});
  const auto M = maximal_fields({f, h}, radii);
  return {int_abs_product(v[0], h), int_abs_product(M[0], h), int_abs_product(M[1], f)};
}

SuiteReport suite_lemma22(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "lemma22";
  const SuiteSpec& s = c.suite("lemma22");
  const double tol = s.param("tolerance");
  const auto gCount = static_cast<std::size_t>(s.param("g_count"));
  rep.tolerance = tol;
  Trend trend;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    if (!has_green(d, cs.m)) {
      rep.notes.push_back(cs.id + ": no Green function; skipped");
      continue;
    }
    if (d.dim() == 1)
      rep.notes.push_back(cs.id + ": D^{2m} G vanishes off the diagonal in 1D, so the double integral is 0");
    const GreenFunction G(d, cs.m);
    const auto corpus = default_corpus(d, c.seed, c.corpusSize);
    Fits fits;
    double asym = 0.0;
    for (int N : cs.grids) {
      auto g = make_grid(d, N);
      const auto fields = sample_all(corpus, g);
      const auto Mf = maximal_fields(fields, operator_radii(*g, c.operatorRadii));
      const std::size_t nG = std::min(gCount, fields.size());
      for (const MultiIndex& a : multi_indices(d.dim(), 2 * cs.m)) {
        const auto v = offdiagonal_action(G, a, fields);
        const std::string gid = join({cs.id, alpha_str(a)});
        for (std::size_t q = 0; q < fields.size(); ++q)
          for (std::size_t gi = 0; gi < nG; ++gi) {
            const double lhs = int_abs_product(v[q], fields[gi]);
            const double rhs = int_abs_product(Mf[q], fields[gi]) + int_abs_product(Mf[gi], fields[q]);
            const double swapped = int_abs_product(v[gi], fields[q]);
            const double big = std::max(lhs, swapped);
            if (big > 0.0) asym = std::max(asym, std::abs(lhs - swapped) / big);
            ReportRow row = make_row(join({gid, corpus[q].id, "g=" + corpus[gi].id}), N, lhs, rhs);
            if (rhs > 0.0) fits[gid].add(N, row.ratio);
            rep.rows.push_back(std::move(row));
          }
      }
    }
    judge(rep, &trend, cs.id + " double-integral constant", fits, tol);
    rep.notes.push_back(cs.id + ": the region |x-y| > d(x) is not symmetric; largest relative change of the " +
                        "double integral under f <-> g is " + num(asym));
  }
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- integral inequality for D^{2m} u

SuiteReport suite_lemma24(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "lemma24";
  const SuiteSpec& s = c.suite("lemma24");
  const double tol = s.param("tolerance");
  const auto gCount = static_cast<std::size_t>(s.param("g_count"));
  rep.tolerance = tol;
  rep.notes.push_back("the distinguished g = |D^alpha u|^{p-1} w is taken with w = 1");
  Trend trend;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    const int n = d.dim();
    if (!has_green(d, cs.m)) {
      rep.notes.push_back(cs.id + ": no Green function; skipped");
      continue;
    }
    const auto corpus = default_corpus(d, c.seed, c.corpusSize);
    Fits fits;
    for (int N : cs.grids) {
      auto g = make_grid(d, N);
      const auto fields = sample_all(corpus, g);
      const auto jets = solve_all(d, cs.m, fields, c.jobs);
      const auto radii = operator_radii(*g, c.operatorRadii);
      const auto Mf = maximal_fields(fields, radii);
      const std::size_t nG = std::min(gCount, fields.size());
      for (const MultiIndex& a : multi_indices(n, 2 * cs.m)) {
        std::vector<SampledField> Kf;
        if (n == 2)
          Kf = maximal_singular_fields(fields, CZKernel(n, cs.m, a), radii);
        else
          Kf.assign(fields.size(), SampledField(g));
        // g = |D^α u_q|^{p-1}, one per (f, p)
        std::vector<SampledField> special;
        for (std::size_t q = 0; q < fields.size(); ++q)
          for (double p : cs.p) {
            SampledField t = jets[q].at(a).abs();
            for (double& x : t.mutable_values()) x = std::pow(x, p - 1.0);
            special.push_back(std::move(t));
          }
        const auto Mspecial = maximal_fields(special, radii);
        const std::string gid = join({cs.id, alpha_str(a)});
        for (std::size_t q = 0; q < fields.size(); ++q) {
          const SampledField& D = jets[q].at(a);
          auto add = [&](const SampledField& h, const SampledField& Mh, const std::string& hid) {
            const double lhs = int_abs_product(D, h);
            const double rhs = int_abs_product(Kf[q], h) + int_abs_product(Mf[q], h) + int_abs_product(Mh, fields[q]) +
                               int_abs_product(fields[q], h);
            ReportRow row = make_row(join({gid, corpus[q].id, "g=" + hid}), N, lhs, rhs);
            if (rhs > 0.0) fits[gid].add(N, row.ratio);
            rep.rows.push_back(std::move(row));
          };
          for (std::size_t gi = 0; gi < nG; ++gi) add(fields[gi], Mf[gi], corpus[gi].id);
          for (std::size_t pi = 0; pi < cs.p.size(); ++pi) {
            const std::size_t idx = q * cs.p.size() + pi;
            add(special[idx], Mspecial[idx], "D^alpha_u^(p-1),p=" + num(cs.p[pi]));
          }
        }
      }
    }
    judge(rep, &trend, cs.id + " integral inequality constant", fits, tol);
  }
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- pointwise domination

SuiteReport suite_pointwise(const ExperimentConfig& c) {
  SuiteReport rep;
  rep.suite = "pointwise";
  const SuiteSpec& s = c.suite("pointwise");
  const double tol = s.param("tolerance");
  rep.tolerance = tol;
  rep.notes.push_back(
      "constants are fitted for |alpha| <= min(2m-n, 2m-1) (gating) and for all |alpha| <= 2m-1 (reported)");
  Trend trend;
  for (const CaseSpec& cs : s.cases) {
    const Domain& d = cs.domain;
    const int n = d.dim();
    if (!has_green(d, cs.m)) {
      rep.notes.push_back(cs.id + ": no Green function; skipped");
      continue;
    }
    const auto corpus = default_corpus(d, c.seed, c.corpusSize);
    const int lemmaOrder = std::min(2 * cs.m - n, 2 * cs.m - 1);
    Fits lemma, extended;
    for (int N : cs.grids) {
      auto g = make_grid(d, N);
      const auto fields = sample_all(corpus, g);
      const auto jets = solve_all(d, cs.m, fields, c.jobs);
      const auto Mf = maximal_fields(fields, operator_radii(*g, c.operatorRadii));
      for (const MultiIndex& a : multi_indices_up_to(n, 2 * cs.m - 1)) {
        const bool inLemma = order(a) <= lemmaOrder;
        const std::string gid = join({cs.id, inLemma ? "lemma_range" : "extended_range", alpha_str(a)});
        for (std::size_t q = 0; q < fields.size(); ++q) {
          const SampledField& u = jets[q].at(a);
          double best = 0.0, lhs = 0.0, rhs = 0.0;
          for (std::size_t k = 0; k < u.size(); ++k) {
            if (!(Mf[q][k] > 0.0)) continue;
            const double r = std::abs(u[k]) / Mf[q][k];
            if (r > best) best = r, lhs = std::abs(u[k]), rhs = Mf[q][k];
          }
          rep.rows.push_back({join({gid, corpus[q].id}), N, lhs, rhs, best, {}});
          (inLemma ? lemma : extended)[gid].add(N, best);
        }
      }
    }
    judge(rep, &trend, cs.id + " pointwise constants, lemma range", lemma, tol);
    if (!extended.empty()) judge(rep, nullptr, cs.id + " pointwise constants, |alpha| <= 2m-1", extended, tol, true);
  }
  trend.store(rep);
  return rep;
}

// ---------------------------------------------------------------- dispatch

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"solver",  "collapse",    "ap",      "hardy",   "condition",
                                              "kernels", "identity",    "boundedness", "apriori", "lemma22",
                                              "lemma24", "pointwise"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& v = suite_names();
  return std::find(v.begin(), v.end(), name) != v.end();
}

SuiteReport run_suite(const std::string& name, const ExperimentConfig& c) {
  static const std::map<std::string, SuiteReport (*)(const ExperimentConfig&)> table{
      {"solver", suite_solver},           {"collapse", suite_collapse},
      {"ap", suite_ap},                   {"hardy", suite_hardy},
      {"condition", suite_condition},     {"kernels", suite_kernels},
      {"identity", suite_identity},       {"boundedness", suite_operator_boundedness},
      {"apriori", suite_apriori},         {"lemma22", suite_lemma22},
      {"lemma24", suite_lemma24},         {"pointwise", suite_pointwise}};
  auto it = table.find(name);
  if (it == table.end()) {
    std::string list;
    for (const std::string& s : suite_names()) list += (list.empty() ? "" : ", ") + s;
    throw ConfigError("unknown suite '" + name + "'; valid suites: " + list);
  }
  const auto t0 = Clock::now();
  SuiteReport r = it->second(c);
  r.seconds = since(t0);
  return r;
}

}  // namespace morreylab
