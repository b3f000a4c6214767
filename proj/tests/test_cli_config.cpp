#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lab/report.hpp"
#include "lab/runconfig.hpp"

using namespace lab;

TEST_CASE("ini parsing: sections, comments, repeated sections, lists") {
  const IniFile ini = IniFile::parse(R"(
# top level
command = sweep
eps = 0.01, 0.005 0.001
[grid]
n = 129
[point]
location = -1
[point]
location = 1
)");
  CHECK(ini.get("command") == "sweep");
  CHECK(ini.get_int("grid.n", 0) == 129);
  CHECK(ini.get_list("eps") == std::vector<double>{0.01, 0.005, 0.001});
  CHECK(ini.get_double("point[0].location", 0) == -1.0);
  CHECK(ini.get_double("point[1].location", 0) == 1.0);
  CHECK(ini.get("missing", "fallback") == "fallback");
}

TEST_CASE("run config basics") {
  IniFile ini = IniFile::parse(R"(
scenario = double-well-1d
eps = 0.01 0.001
resolution = 2049
seed = 7
out = results
)");
  const RunConfig cfg = RunConfig::from_ini(ini);
  CHECK(cfg.scenario_name == "double-well-1d");
  CHECK(cfg.resolution == 2049);
  CHECK(cfg.seed == 7);
  CHECK(cfg.out_dir == "results");
  cfg.require_eps_decreasing();

  IniFile bad = IniFile::parse("eps = 0.001 0.01\n");
  CHECK_THROWS_AS(RunConfig::from_ini(bad).require_eps_decreasing(),
                  std::invalid_argument);
}

TEST_CASE("verdicts carry measured, predicted, tolerance and tag") {
  RunReport rep;
  rep.command = "test";
  rep.add_abs("a", 1.0, 1.005, 0.01, "potential-theorem");
  rep.add_rel("b", 2.0, 2.3, 0.05, "thhk-expansion");
  rep.add_le("c", 0.5, 1.0, "noyau");
  rep.add_ge("d", 0.97, 0.95, "th4-weights");
  CHECK(rep.verdicts[0].pass);
  CHECK_FALSE(rep.verdicts[1].pass);
  CHECK(rep.verdicts[2].pass);
  CHECK(rep.verdicts[3].pass);
  CHECK_FALSE(rep.all_pass());

  const auto j = rep.to_json();
  CHECK(j["verdicts"].size() == 4);
  for (const auto& v : j["verdicts"]) {
    CHECK(v.contains("measured"));
    CHECK(v.contains("predicted"));
    CHECK(v.contains("tolerance"));
    CHECK(v.contains("tag"));
  }
  const std::string line = rep.verdicts[1].line();
  CHECK(line.find("[FAIL]") == 0);
  CHECK(line.find("tag=thhk-expansion") != std::string::npos);
}

TEST_CASE("json report serialization is deterministic") {
  RunReport rep;
  rep.command = "solve";
  rep.scenario = "s";
  rep.payload["b"] = 2.0;
  rep.payload["a"] = 1.0;
  const std::string d1 = rep.to_json().dump(2);
  const std::string d2 = rep.to_json().dump(2);
  CHECK(d1 == d2);
}
