#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "morreylab/grid.hpp"
#include "morreylab/spaces.hpp"
#include "morreylab/weights.hpp"

namespace morreylab {

/// Malformed or missing configuration (the CLI maps it to exit code 2).
class ConfigError : public Error {
public:
  using Error::Error;
};

struct WeightSpec {
  std::string id;
  bool constant = true;
  double gamma = 0.0;
  std::string at = "center";  // "center" (domain middle) or "boundary"

  Point anchor(const Domain& d) const;
  Weight make(const Domain& d) const;
};

struct PhiSpec {
  std::string id;
  std::string kind = "power";  // power | weight_measure | inverse
  double value = 0.5;          // λ/n for power, k for weight_measure

  PhiFunction make(int n, double p, const Weight& w) const;
};

struct CaseSpec {
  std::string id;
  Domain domain = Domain::interval(0, 1);
  int m = 1;
  std::vector<int> grids;
  std::vector<double> p;
};

struct SuiteSpec {
  std::vector<CaseSpec> cases;
  std::map<std::string, double> params;

  double param(const std::string& key) const;
};

struct ExperimentConfig {
  std::uint64_t seed = 20240917;
  std::size_t corpusSize = 20;
  int centers1d = 33;
  int centers2d = 9;
  int radii = 24;
  int operatorRadii = 48;
  std::vector<WeightSpec> weights;
  std::vector<PhiSpec> phis;
  std::string out = "morreylab-out";
  int jobs = 0;  // 0: all hardware threads
  std::map<std::string, SuiteSpec> suites;

  static ExperimentConfig defaults();
  /// Throws ConfigError for a suite missing from the config.
  const SuiteSpec& suite(const std::string& name) const;
  int centers(int dim) const { return dim == 1 ? centers1d : centers2d; }
};

/// Keys present in the JSON override the defaults; unknown keys are errors.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
/// Throws ConfigError if the file is missing or malformed.
ExperimentConfig load_config(const std::string& path);

/// Replaces every case's refinement list by N, 2N, 4N, ... of the same length.
void override_grid(ExperimentConfig& c, int n);

Domain domain_from_json(const nlohmann::json& j);
nlohmann::json domain_to_json(const Domain& d);

}  // namespace morreylab
