#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "morreylab/config.hpp"
#include "morreylab/corpus.hpp"
#include "morreylab/harness.hpp"
#include "morreylab/operators.hpp"
#include "morreylab/report.hpp"
#include "morreylab/solver.hpp"
#include "morreylab/spaces.hpp"
#include "morreylab/weights.hpp"

using namespace morreylab;
namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string out;
  int jobs = -1;
  long long seed = -1;
  int grid = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON configuration file (defaults built in)");
  app->add_option("--out", c.out, "output directory (else $MORREYLAB_OUT, else the config's out)");
  app->add_option("--jobs", c.jobs, "worker threads (0 = all cores)");
  app->add_option("--seed", c.seed, "corpus seed");
  app->add_option("--grid", c.grid, "cells per axis (suites: coarsest of the refinement list)");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig::defaults() : load_config(c.config);
  if (c.seed >= 0) cfg.seed = static_cast<std::uint64_t>(c.seed);
  if (c.jobs >= 0) cfg.jobs = c.jobs;
  if (c.grid > 0) override_grid(cfg, c.grid);
  if (!c.out.empty())
    cfg.out = c.out;
  else if (const char* env = std::getenv("MORREYLAB_OUT"); env && *env)
    cfg.out = env;
  return cfg;
}

struct DomainArgs {
  std::string kind = "interval";
  double a = 0.0, b = 1.0, radius = 1.0;
  Domain make() const {
    if (kind == "interval") return Domain::interval(a, b);
    if (kind == "disk") return Domain::disk({0, 0}, radius);
    throw ConfigError("domain must be interval or disk");
  }
};

void add_domain(CLI::App* app, DomainArgs& d) {
  app->add_option("--domain", d.kind, "interval or disk")->check(CLI::IsMember({"interval", "disk"}));
  app->add_option("--a", d.a, "interval left end");
  app->add_option("--b", d.b, "interval right end");
  app->add_option("--radius", d.radius, "disk radius (centered at the origin)");
}

const CorpusFunction& find_function(const std::vector<CorpusFunction>& corpus, const std::string& id) {
  for (const CorpusFunction& f : corpus)
    if (f.id == id) return f;
  std::string list;
  for (const CorpusFunction& f : corpus) list += (list.empty() ? "" : ", ") + f.id;
  throw ConfigError("unknown function '" + id + "'; available: " + list);
}

const WeightSpec& find_weight(const ExperimentConfig& c, const std::string& id) {
  for (const WeightSpec& w : c.weights)
    if (w.id == id) return w;
  throw ConfigError("unknown weight '" + id + "'");
}

const PhiSpec& find_phi(const ExperimentConfig& c, const std::string& id) {
  for (const PhiSpec& p : c.phis)
    if (p.id == id) return p;
  throw ConfigError("unknown phi '" + id + "'");
}

std::string print_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  std::string s = buf;
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

int finish(const SuiteReport& r, const std::string& out) {
  write_suite_report(r, out);
  for (const Check& c : r.checks)
    std::cout << (c.informational ? "  info " : (c.pass ? "  PASS " : "  FAIL ")) << c.name
              << (c.detail.empty() ? "" : " -- " + c.detail) << "\n";
  std::cout << r.suite << ": " << r.verdict() << " (fitted constant " << format_number(r.fittedConstant) << ", "
            << format_number(std::round(r.seconds * 100) / 100) << " s)\n";
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted Morrey-space toolkit and verification harness"};
  app.require_subcommand(1);
  Common common;
  DomainArgs dom;

  auto* norm = app.add_subcommand("norm", "compute a norm of a corpus function");
  std::string fId = "const_1", wId = "one", phiId = "inverse", kind = "morrey";
  double p = 2.0;
  add_common(norm, common);
  add_domain(norm, dom);
  norm->add_option("--f", fId, "corpus function id");
  norm->add_option("--weight", wId, "weight id from the config");
  norm->add_option("--phi", phiId, "phi id from the config");
  norm->add_option("--p", p, "exponent");
  norm->add_option("--kind", kind, "lp, weak, morrey or weak-morrey")
      ->check(CLI::IsMember({"lp", "weak", "morrey", "weak-morrey"}));

  auto* weight = app.add_subcommand("weight", "A_p report for the configured weights");
  std::vector<double> ps{1.0, 1.5, 2.0, 3.0};
  add_common(weight, common);
  add_domain(weight, dom);
  weight->add_option("--p", ps, "exponents");

  auto* condition = app.add_subcommand("condition", "check the phi condition for the configured phi and weights");
  add_common(condition, common);
  auto* hardy = app.add_subcommand("hardy", "Hardy best constant and inequality family");
  add_common(hardy, common);

  auto* solve = app.add_subcommand("solve", "solve the Dirichlet problem and dump the jet");
  int m = 1;
  add_common(solve, common);
  add_domain(solve, dom);
  solve->add_option("--f", fId, "corpus function id");
  solve->add_option("--m", m, "order of the operator (-Laplacian)^m");

  auto* kernels = app.add_subcommand("kernels", "Green-function and Poisson kernel bounds");
  add_common(kernels, common);

  auto* operators = app.add_subcommand("operators", "maximal and singular operator fields plus the identity check");
  add_common(operators, common);
  add_domain(operators, dom);
  operators->add_option("--f", fId, "corpus function id");

  auto* verify = app.add_subcommand("verify", "run harness suites");
  std::vector<std::string> suites;
  add_common(verify, common);
  verify->add_option("--suite", suites, "suite name, repeatable, or 'all'")->required();

  auto* report = app.add_subcommand("report", "merge suite summaries into summary.json");
  add_common(report, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig cfg = resolve(common);
    const int N = common.grid > 0 ? common.grid : 256;

    if (*norm) {
      const Domain d = dom.make();
      auto g = std::make_shared<const Grid>(d, N);
      const auto corpus = default_corpus(d, cfg.seed, cfg.corpusSize);
      const SampledField f = find_function(corpus, fId).sample(g);
      const Weight w = find_weight(cfg, wId).make(d);
      const Ball all{d.middle(), d.diameter()};
      double v;
      if (kind == "lp")
        v = lp_weighted_norm(f, w, p, all);
      else if (kind == "weak")
        v = weak_lp_weighted_norm(f, w, p, all);
      else
        v = morrey_norm(f, w, find_phi(cfg, phiId).make(d.dim(), p, w), p, ball_sweep(*g, cfg.centers(d.dim()), cfg.radii),
                        kind == "weak-morrey")
                .value;
      std::cout << print_value(v) << "\n";
      return 0;
    }

    if (*weight) {
      const Domain d = dom.make();
      auto g = std::make_shared<const Grid>(d, N);
      SuiteReport r;
      r.suite = "weight";
      for (double pp : ps)
        for (const WeightSpec& ws : cfg.weights) {
          const Weight w = ws.make(d);
          const ApMembership mem = ap_membership(w, pp, g, ap_sweep(*g, w, cfg.centers(d.dim()), cfg.radii));
          std::vector<std::string> flags{mem.member ? "member" : "out-of-class"};
          if (mem.estimate.regularized) flags.push_back("regularized");
          r.rows.push_back({ws.id + "/p=" + format_number(pp), N, mem.estimate.value, 1.0, mem.estimate.value, flags});
          std::cout << ws.id << " p=" << pp << ": A_p constant " << format_number(mem.estimate.value) << " ("
                    << flags.front() << ")\n";
        }
      r.check("report written", true);
      write_suite_report(r, cfg.out);
      return 0;
    }

    if (*condition) return finish(run_suite("condition", cfg), cfg.out);
    if (*hardy) return finish(run_suite("hardy", cfg), cfg.out);
    if (*kernels) return finish(run_suite("kernels", cfg), cfg.out);

    if (*solve) {
      const Domain d = dom.make();
      auto g = std::make_shared<const Grid>(d, N);
      const auto corpus = default_corpus(d, cfg.seed, cfg.corpusSize);
      const SampledField f = find_function(corpus, fId).sample(g);
      const Jet jet = solve_dirichlet(d, m, f);
      fs::create_directories(cfg.out);
      const fs::path path = fs::path(cfg.out) / ("solve_" + fId + "_m" + std::to_string(m) + "_N" + std::to_string(N) + ".csv");
      std::ofstream out(path);
      out << (d.dim() == 1 ? "x" : "x,y") << ",f";
      for (const auto& [s, u] : jet) out << ",D" << s[0] << s[1];
      out << "\n";
      for (std::size_t k = 0; k < g->size(); ++k) {
        out << format_number(g->node(k)[0]);
        if (d.dim() == 2) out << ',' << format_number(g->node(k)[1]);
        out << ',' << format_number(f[k]);
        for (const auto& [s, u] : jet) out << ',' << format_number(u[k]);
        out << "\n";
      }
      std::cout << "max|u| " << format_number(jet.at({0, 0}).max_abs()) << ", residual "
                << format_number(residual_check(d, m, jet, f)) << "\nwrote " << path.string() << "\n";
      return 0;
    }

    if (*operators) {
      const Domain d = dom.make();
      auto g = std::make_shared<const Grid>(d, N);
      const auto corpus = default_corpus(d, cfg.seed, cfg.corpusSize);
      const SampledField f = find_function(corpus, fId).sample(g);
      const auto radii = operator_radii(*g, cfg.operatorRadii);
      std::vector<std::pair<std::string, SampledField>> cols{{"f", f}, {"Mf", maximal_field(f, radii)}};
      if (d.dim() == 2)
        for (MultiIndex a : {MultiIndex{2, 0}, MultiIndex{1, 1}, MultiIndex{0, 2}}) {
          const CZKernel k(2, 1, a);
          const std::string tag = std::to_string(a[0]) + std::to_string(a[1]);
          cols.push_back({"Keps" + tag, truncated_singular_field(f, k, g->spacing())});
          cols.push_back({"Kstar" + tag, maximal_singular_field(f, k, radii)});
        }
      fs::create_directories(cfg.out);
      const fs::path path = fs::path(cfg.out) / ("operators_" + fId + "_N" + std::to_string(N) + ".csv");
      std::ofstream out(path);
      out << (d.dim() == 1 ? "x" : "x,y");
      for (const auto& col : cols) out << ',' << col.first;
      out << "\n";
      for (std::size_t k = 0; k < g->size(); ++k) {
        out << format_number(g->node(k)[0]);
        if (d.dim() == 2) out << ',' << format_number(g->node(k)[1]);
        for (const auto& col : cols) out << ',' << format_number(col.second[k]);
        out << "\n";
      }
      std::cout << "wrote " << path.string() << "\n";
      return finish(run_suite("identity", cfg), cfg.out);
    }

    if (*verify) {
      std::vector<std::string> names;
      for (const std::string& s : suites) {
        if (s == "all") {
          names.insert(names.end(), suite_names().begin(), suite_names().end());
        } else if (!is_suite(s)) {
          run_suite(s, cfg);  // throws the listing of valid suites
        } else {
          names.push_back(s);
        }
      }
      int rc = 0;
      for (const std::string& s : names) rc = std::max(rc, finish(run_suite(s, cfg), cfg.out));
      merge_reports(cfg.out);
      return rc;
    }

    if (*report) {
      const auto merged = merge_reports(cfg.out);
      for (const auto& s : merged["suites"])
        std::cout << s["suite"].get<std::string>() << ": " << s["verdict"].get<std::string>() << "\n";
      std::cout << "wrote " << (fs::path(cfg.out) / "summary.json").string() << "\n";
      return merged["verdict"] == "PASS" ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
