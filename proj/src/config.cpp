#include "morreylab/config.hpp"

#include <fstream>
#include <set>

namespace morreylab {

using nlohmann::json;

Point WeightSpec::anchor(const Domain& d) const {
  if (at == "center") return d.middle();
  if (at == "boundary")
    return d.kind() == Domain::Kind::Interval ? Point{d.a(), 0.0} : Point{d.center()[0] + d.radius(), d.center()[1]};
  throw ConfigError("weight anchor must be center or boundary: " + at);
}

Weight WeightSpec::make(const Domain& d) const {
  if (constant) return Weight::constant(1.0);
  return Weight::power(anchor(d), gamma, d.dim());
}

PhiFunction PhiSpec::make(int n, double p, const Weight& w) const {
  if (kind == "power") return PhiFunction::power_law(value * n, p, n);
  if (kind == "weight_measure") return PhiFunction::weight_measure(value, p, w);
  if (kind == "inverse") return PhiFunction::inverse_weight_measure(p, w);
  throw ConfigError("unknown phi kind: " + kind);
}

double SuiteSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw ConfigError("missing suite parameter: " + key);
  return it->second;
}

const SuiteSpec& ExperimentConfig::suite(const std::string& name) const {
  auto it = suites.find(name);
  if (it == suites.end()) throw ConfigError("suite missing from config: " + name);
  return it->second;
}

namespace {

CaseSpec make_case(std::string id, Domain d, int m, std::vector<int> grids, std::vector<double> p = {}) {
  return {std::move(id), d, m, std::move(grids), std::move(p)};
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  c.weights = {{"one", true, 0.0, "center"},
               {"pow-0.4_center", false, -0.4, "center"},
               {"pow0.5_center", false, 0.5, "center"},
               {"pow-0.4_boundary", false, -0.4, "boundary"},
               {"pow0.5_boundary", false, 0.5, "boundary"}};
  c.phis = {{"power_0.25n", "power", 0.25},     {"power_0.5n", "power", 0.5},
            {"power_0.75n", "power", 0.75},     {"wmeasure_0.3", "weight_measure", 0.3},
            {"wmeasure_0.7", "weight_measure", 0.7}, {"inverse", "inverse", 0.0}};

  const Domain unit = Domain::interval(0, 1);
  const Domain sym = Domain::interval(-1, 1);
  const Domain disk = Domain::disk({0, 0}, 1);
  const std::vector<int> three{128, 256, 512};
  auto& s = c.suites;

  s["solver"] = {{make_case("interval_m1", unit, 1, {256, 512}), make_case("interval_m2", unit, 2, {256, 512}),
                  make_case("disk_m1", disk, 1, {256, 512})},
                 {{"tolerance_coarse", 0.01}, {"tolerance_fine", 0.003}, {"seconds_limit", 30}}};
  s["collapse"] = {{make_case("interval", unit, 1, {256}, {1, 2, 3}), make_case("disk", disk, 1, {64}, {1, 2, 3})},
                   {{"tolerance", 1e-6}}};
  s["ap"] = {{make_case("interval_sym", sym, 1, three, {1, 1.5, 2, 3}), make_case("disk", disk, 1, {64}, {1, 1.5, 2, 3})},
             {{"tolerance", 0.03}, {"growth", 1.5}, {"p_sharp", 2}, {"gamma_sharp", 0.5}}};
  s["hardy"] = {{}, {{"d", 1}, {"tolerance", 1e-6}, {"sharpness", 0.9}}};
  s["condition"] = {{make_case("interval", unit, 1, {64}, {1.5, 2, 3}), make_case("disk", disk, 1, {64}, {1.5, 2, 3})},
                    {{"tolerance", 0.02}, {"r_min_fraction", 1e-24}, {"upper_limit_factor", 10}, {"radii", 40}}};
  s["kernels"] = {{make_case("interval_m1", unit, 1, {128, 256}), make_case("interval_m2", unit, 2, {128, 256}),
                   make_case("disk_m1", disk, 1, {128, 256}), make_case("disk_m2", disk, 2, {128, 256})},
                  {{"pairs_small", 1000},
                   {"pairs_large", 4000},
                   {"tolerance", 0.10},
                   {"poisson_samples", 2000},
                   {"poisson_tolerance", 0.02},
                   {"seconds_limit", 120}}};
  s["identity"] = {{make_case("disk", Domain::disk({0, 0}, 2), 1, {256})},
                   {{"tolerance", 0.02}, {"indicator_radius", 1.0}, {"mollifier_width", 0.4}}};
  s["boundedness"] = {{make_case("interval", unit, 1, three, {1, 2, 3}), make_case("disk", disk, 1, three, {2})},
                      {{"tolerance", 0.15}, {"growth", 1.5}, {"negative_p", 2}, {"seconds_limit", 600}}};
  s["apriori"] = {{make_case("interval_m1", unit, 1, three, {2}), make_case("interval_m2", unit, 2, three, {2}),
                   make_case("disk_m1", disk, 1, three, {2})},
                  {{"tolerance", 0.15}, {"scale", 2.5}, {"scale_tolerance", 1e-8}, {"seconds_limit", 900}}};
  s["lemma22"] = {{make_case("interval_m1", unit, 1, three), make_case("interval_m2", unit, 2, three),
                   make_case("disk_m1", disk, 1, {32, 64})},
                  {{"tolerance", 0.15}, {"g_count", 6}}};
  s["lemma24"] = {{make_case("interval_m1", unit, 1, three, {2}), make_case("interval_m2", unit, 2, three, {2}),
                   make_case("disk_m1", disk, 1, {64, 128, 256}, {2})},
                  {{"tolerance", 0.15}, {"g_count", 6}}};
  s["pointwise"] = {{make_case("interval_m1", unit, 1, three), make_case("interval_m2", unit, 2, three),
                     make_case("disk_m1", disk, 1, three)},
                    {{"tolerance", 0.10}}};
  return c;
}

Domain domain_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "interval") return Domain::interval(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "disk") {
    const auto c = j.at("center").get<std::vector<double>>();
    if (c.size() != 2) throw ConfigError("disk center needs two coordinates");
    return Domain::disk({c[0], c[1]}, j.at("radius").get<double>());
  }
  throw ConfigError("unknown domain kind: " + kind);
}

json domain_to_json(const Domain& d) {
  if (d.kind() == Domain::Kind::Interval) return {{"kind", "interval"}, {"a", d.a()}, {"b", d.b()}};
  return {{"kind", "disk"}, {"center", {d.center()[0], d.center()[1]}}, {"radius", d.radius()}};
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c = ExperimentConfig::defaults();
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"seed", "corpus_size", "centers_1d", "centers_2d", "radii", "operator_radii", "weights", "phi",
                    "out", "jobs", "suites"},
                   "config");
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("corpus_size")) c.corpusSize = j["corpus_size"].get<std::size_t>();
    if (j.contains("centers_1d")) c.centers1d = j["centers_1d"].get<int>();
    if (j.contains("centers_2d")) c.centers2d = j["centers_2d"].get<int>();
    if (j.contains("radii")) c.radii = j["radii"].get<int>();
    if (j.contains("operator_radii")) c.operatorRadii = j["operator_radii"].get<int>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
    if (j.contains("weights")) {
      c.weights.clear();
      for (const json& w : j["weights"]) {
        reject_unknown(w, {"id", "type", "gamma", "at"}, "weight");
        WeightSpec s;
        s.id = w.at("id").get<std::string>();
        const std::string type = w.at("type").get<std::string>();
        if (type != "constant" && type != "power") throw ConfigError("unknown weight type: " + type);
        s.constant = type == "constant";
        s.gamma = w.value("gamma", 0.0);
        s.at = w.value("at", std::string("center"));
        if (s.at != "center" && s.at != "boundary") throw ConfigError("weight anchor must be center or boundary");
        c.weights.push_back(s);
      }
    }
    if (j.contains("phi")) {
      c.phis.clear();
      for (const json& f : j["phi"]) {
        reject_unknown(f, {"id", "kind", "value"}, "phi");
        PhiSpec s{f.at("id").get<std::string>(), f.at("kind").get<std::string>(), f.value("value", 0.0)};
        if (s.kind != "power" && s.kind != "weight_measure" && s.kind != "inverse")
          throw ConfigError("unknown phi kind: " + s.kind);
        c.phis.push_back(s);
      }
    }
    if (j.contains("suites")) {
      for (auto it = j["suites"].begin(); it != j["suites"].end(); ++it) {
        auto known = c.suites.find(it.key());
        if (known == c.suites.end()) throw ConfigError("unknown suite in config: " + it.key());
        SuiteSpec& s = known->second;
        const json& sj = it.value();
        reject_unknown(sj, {"cases", "params"}, "suite " + it.key());
        if (sj.contains("cases")) {
          s.cases.clear();
          for (const json& cj : sj["cases"]) {
            reject_unknown(cj, {"id", "domain", "m", "grids", "p"}, "case");
            CaseSpec cs;
            cs.id = cj.at("id").get<std::string>();
            cs.domain = domain_from_json(cj.at("domain"));
            cs.m = cj.value("m", 1);
            cs.grids = cj.value("grids", std::vector<int>{});
            cs.p = cj.value("p", std::vector<double>{});
            s.cases.push_back(cs);
          }
        }
        if (sj.contains("params"))
          for (auto p = sj["params"].begin(); p != sj["params"].end(); ++p) {
            if (!s.params.count(p.key())) throw ConfigError("unknown parameter '" + p.key() + "' in suite " + it.key());
            s.params[p.key()] = p.value().get<double>();
          }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["corpus_size"] = c.corpusSize;
  j["centers_1d"] = c.centers1d;
  j["centers_2d"] = c.centers2d;
  j["radii"] = c.radii;
  j["operator_radii"] = c.operatorRadii;
  j["out"] = c.out;
  j["jobs"] = c.jobs;
  j["weights"] = json::array();
  for (const WeightSpec& w : c.weights) {
    json o{{"id", w.id}, {"type", w.constant ? "constant" : "power"}};
    if (!w.constant) {
      o["gamma"] = w.gamma;
      o["at"] = w.at;
    }
    j["weights"].push_back(o);
  }
  j["phi"] = json::array();
  for (const PhiSpec& f : c.phis) {
    json o{{"id", f.id}, {"kind", f.kind}};
    if (f.kind != "inverse") o["value"] = f.value;
    j["phi"].push_back(o);
  }
  for (const auto& [name, s] : c.suites) {
    json cases = json::array();
    for (const CaseSpec& cs : s.cases) {
      json o{{"id", cs.id}, {"domain", domain_to_json(cs.domain)}, {"m", cs.m}, {"grids", cs.grids}};
      if (!cs.p.empty()) o["p"] = cs.p;
      cases.push_back(o);
    }
    j["suites"][name] = {{"cases", cases}, {"params", s.params}};
  }
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return config_from_json(j);
}

void override_grid(ExperimentConfig& c, int n) {
  if (n < 8) throw ConfigError("grid must be at least 8");
  for (auto& [name, s] : c.suites)
    for (CaseSpec& cs : s.cases)
      for (std::size_t k = 0; k < cs.grids.size(); ++k) cs.grids[k] = n << k;
}

}  // namespace morreylab
