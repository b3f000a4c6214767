// End-to-end runs of the CLI binary (path given as the first argument).

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace {

std::string g_lab;

int run(const std::string& args, const std::string& log) {
  const std::string cmd = g_lab + " " + args + " > " + log + " 2>&1";
  return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json report(const std::string& dir) {
  return nlohmann::json::parse(slurp(dir + "/report.json"));
}

}  // namespace

TEST_CASE("solve writes an eigenpair dump and a report") {
  REQUIRE(run("solve --scenario harmonic-1d --eps 0.01 --resolution 257 "
              "--out smoke_solve --dump-matrix",
              "smoke_solve.log") == 0);
  const auto j = report("smoke_solve");
  CHECK(j["payload"]["lambda"].get<double>() ==
        doctest::Approx(1.1).epsilon(0.01));
  CHECK(std::filesystem::exists("smoke_solve/eigenpair.csv"));
  CHECK(std::filesystem::exists("smoke_solve/matrix.txt"));
}

TEST_CASE("sweep produces fit, tracks and plot series") {
  REQUIRE(run("sweep --scenario quartic-well-1d --resolution 1025 "
              "--eps 0.02 0.01 0.005 0.002 0.001 --out smoke_sweep",
              "smoke_sweep.log") == 0);
  const auto j = report("smoke_sweep");
  CHECK(j["payload"]["fit"]["c0"].get<double>() ==
        doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::filesystem::exists("smoke_sweep/sweep_summary.csv"));
  CHECK(std::filesystem::exists("smoke_sweep/lambda.dat"));
  CHECK(std::filesystem::exists("smoke_sweep/decay.dat"));
}

TEST_CASE("sweep with one eps value reports the fit precondition") {
  CHECK(run("sweep --scenario quartic-well-1d --resolution 257 --eps 0.01 "
            "--out smoke_sweep1",
            "smoke_sweep1.log") != 0);
  const std::string log = slurp("smoke_sweep1.log");
  CHECK(log.find("expansion fit needs >= 4 points") != std::string::npos);
}

TEST_CASE("predict emits the closed-form table without a PDE solve") {
  REQUIRE(run("predict --scenario double-well-1d --out smoke_predict",
              "smoke_predict.log") == 0);
  const auto j = report("smoke_predict");
  CHECK(j["payload"]["gamma"]["0"].get<double>() == doctest::Approx(0.5));
  CHECK(j["payload"]["ledger"]["degenerate"].get<bool>());
  CHECK(std::filesystem::exists("smoke_predict/predictors.csv"));
}

TEST_CASE("blowup writes concentration and profile tables") {
  REQUIRE(run("blowup --scenario double-well-1d --resolution 2049 "
              "--eps 0.002 0.001 --out smoke_blowup",
              "smoke_blowup.log") == 0);
  const auto j = report("smoke_blowup");
  CHECK(j["payload"]["blocks"].size() == 2);
  CHECK(std::filesystem::exists("smoke_blowup/concentration.csv"));
  CHECK(std::filesystem::exists("smoke_blowup/profile_point0.csv"));
}

TEST_CASE("lyapunov certifies points and the annulus cycle") {
  REQUIRE(run("lyapunov --scenario gradient-well-1d --out smoke_lyap",
              "smoke_lyap.log") == 0);
  const auto cert = nlohmann::json::parse(slurp("smoke_lyap/certificate.json"));
  REQUIRE(cert["certificates"].size() == 3);
  CHECK(cert["certificates"][0]["certified"].get<bool>());  // repellor at -1
  CHECK(cert["certificates"][1]["certified"].get<bool>());  // attractor at 0

  REQUIRE(run("lyapunov --scenario annulus-cycle --beta 2 --out smoke_lyap2",
              "smoke_lyap2.log") == 0);
  const auto cert2 =
      nlohmann::json::parse(slurp("smoke_lyap2/certificate.json"));
  CHECK(cert2["certificates"][0]["certified"].get<bool>());
  CHECK(cert2["certificates"][0]["orientation"] == "reversed-field");
}

TEST_CASE("reproduce rejects unknown tags with the catalog") {
  CHECK(run("reproduce no-such-tag --out smoke_repro", "smoke_repro.log") != 0);
  const std::string log = slurp("smoke_repro.log");
  CHECK(log.find("potential-theorem") != std::string::npos);
}

int main(int argc, char** argv) {
  if (argc > 1) g_lab = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(1, argv);
  return ctx.run();
}
