#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "morreylab/config.hpp"
#include "morreylab/harness.hpp"

using namespace morreylab;
using nlohmann::json;

TEST_CASE("defaults cover every suite and round-trip through JSON") {
  const ExperimentConfig c = ExperimentConfig::defaults();
  for (const std::string& s : suite_names()) CHECK_NOTHROW(c.suite(s));
  const json j = config_to_json(c);
  CHECK(config_to_json(config_from_json(j)) == j);
}

TEST_CASE("shipped default config equals the built-in defaults") {
  const ExperimentConfig shipped = load_config(MORREYLAB_SOURCE_DIR "/configs/default.json");
  CHECK(config_to_json(shipped) == config_to_json(ExperimentConfig::defaults()));
}

TEST_CASE("partial configs override only the given keys") {
  const json j = json::parse(R"({"seed": 5, "suites": {"solver": {"params": {"seconds_limit": 3}}}})");
  const ExperimentConfig c = config_from_json(j);
  CHECK(c.seed == 5);
  CHECK(c.suite("solver").param("seconds_limit") == 3);
  CHECK(c.suite("solver").cases.size() == ExperimentConfig::defaults().suite("solver").cases.size());
  CHECK(c.weights.size() == ExperimentConfig::defaults().weights.size());
}

TEST_CASE("malformed configs are config errors") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"sede": 5})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"seed": "x"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"suites": {"nope": {}}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"weights": [{"id": "w", "type": "log"}]})")), ConfigError);
  CHECK_THROWS_AS(
      config_from_json(json::parse(R"({"suites": {"solver": {"cases": [{"id": "c", "domain": {"kind": "cube"}}]}}})")),
      ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"suites": {"solver": {"params": {"extra": 1}}}})")), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);

  const std::string path = "test_config_broken.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("grid override keeps the refinement length") {
  ExperimentConfig c = ExperimentConfig::defaults();
  override_grid(c, 32);
  CHECK(c.suite("apriori").cases.front().grids == std::vector<int>{32, 64, 128});
  CHECK(c.suite("identity").cases.front().grids == std::vector<int>{32});
  CHECK_THROWS_AS(override_grid(c, 2), ConfigError);
}

TEST_CASE("weight and phi specs") {
  const Domain d = Domain::interval(0, 2);
  const WeightSpec b{"b", false, 0.5, "boundary"};
  CHECK(b.anchor(d)[0] == 0.0);
  CHECK(b.make(d)({1.0, 0}) == doctest::Approx(1.0));
  CHECK(b.make(d)({0.25, 0}) == doctest::Approx(0.5));
  const Domain disk = Domain::disk({1, 0}, 2);
  CHECK(b.anchor(disk)[0] == 3.0);
  CHECK(WeightSpec{"c", false, 0.5, "center"}.anchor(disk)[0] == 1.0);
  CHECK(WeightSpec{"one"}.make(d).kind() == Weight::Kind::Constant);

  const PhiFunction pw = PhiSpec{"p", "power", 0.5}.make(2, 2.0, Weight::constant(1));
  CHECK(pw.kind() == PhiFunction::Kind::PowerLaw);
  CHECK(pw.lambda() == 1.0);
  CHECK(PhiSpec{"i", "inverse", 0}.make(1, 2, Weight::constant(1)).kind() == PhiFunction::Kind::InverseWeightMeasure);
  const PhiSpec bogus{"x", "bogus", 0};
  CHECK_THROWS_AS(bogus.make(1, 2, Weight::constant(1)), ConfigError);
}

TEST_CASE("domain JSON") {
  const Domain d = domain_from_json(json::parse(R"({"kind": "disk", "center": [1, 2], "radius": 3})"));
  CHECK(d.kind() == Domain::Kind::Disk);
  CHECK(d.center()[1] == 2.0);
  CHECK(domain_to_json(d)["radius"] == 3.0);
  CHECK_THROWS_AS(domain_from_json(json::parse(R"({"kind": "disk", "center": [1], "radius": 3})")), ConfigError);
}
