#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lab/eigensolver.hpp"
#include "lab/rng.hpp"
#include "lab/scenario_library.hpp"
#include "oracles.hpp"

using namespace lab;

namespace {

constexpr double kPi = 3.14159265358979323846;

ScenarioSpec torus1d(double period, ScalarFn c) {
  ScenarioSpec s;
  s.domain = {DomainKind::flat_torus, 1, {{{0, period}, {0, 1}}},
              {BoundaryKind::periodic, BoundaryKind::periodic}};
  s.c = std::move(c);
  return s;
}

}  // namespace

TEST_CASE("dirichlet ground state: lambda -> 1 and u ~ sin(x)") {
  const double c0 = 1e-3;
  ScenarioSpec s;
  s.domain = {DomainKind::interval, 1, {{{0, kPi}, {0, 1}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
  s.c = [c0](const Pt&) { return c0; };
  const Grid g = build_grid(s, 513);
  const OperatorMatrix op = assemble_operator(s, g, 1.0);
  const EigenPair p = principal_eigenpair(op, g, {1e-12, 10000});

  CHECK(p.lambda == doctest::Approx(1.0 + c0).epsilon(2e-5));
  CHECK(p.residual <= 1e-10);

  // compare the eigenvector shape against sin(x), both quad-normalized
  double worst = 0;
  const double norm = std::sqrt(kPi / 2.0);  // int sin^2 over (0, pi)
  for (int i = 0; i < g.n_free; ++i) {
    const double x = g.point_of_free(i)[0];
    worst = std::max(worst, std::abs(p.u[i] - std::sin(x) / norm));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("constant potential on the torus gives lambda = c0, u constant") {
  const double c0 = 2.5;
  const ScenarioSpec s = torus1d(1.0, [c0](const Pt&) { return c0; });
  const Grid g = build_grid(s, 64);
  const OperatorMatrix op = assemble_operator(s, g, 0.1);
  const EigenPair p = principal_eigenpair(op, g, {1e-12, 10000});
  CHECK(p.lambda == doctest::Approx(c0).epsilon(1e-11));
  for (int i = 1; i < g.n_free; ++i)
    CHECK(p.u[i] == doctest::Approx(p.u[0]).epsilon(1e-10));
}

TEST_CASE("torus potential 2 + sin x stays inside the bracket") {
  const ScenarioSpec s =
      torus1d(2 * kPi, [](const Pt& p) { return 2.0 + std::sin(p[0]); });
  const double eps = 0.01;
  // quad coefficient at the minimum (x = 3pi/2) is 1/2
  const double cap = std::sqrt(0.5);
  double prev = 0;
  for (int n : {512, 1024}) {
    const Grid g = build_grid(s, n);
    const OperatorMatrix op = assemble_operator(s, g, eps);
    const EigenPair p = principal_eigenpair(op, g, {1e-12, 10000});
    CHECK(p.lambda >= 1.0);
    CHECK(p.lambda <= 1.0 + cap * std::sqrt(eps) + 0.5 * eps);
    if (prev != 0) CHECK(std::abs(p.lambda - prev) < 1e-5);
    prev = p.lambda;
  }
}

TEST_CASE("bracket property: min c <= lambda <= mean of c on the torus") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = 0.5 + rng.next_double();
    const double b = rng.next_double();
    const double ph = 2 * kPi * rng.next_double();
    const ScenarioSpec s = torus1d(2 * kPi, [=](const Pt& p) {
      return 1.0 + a + b * std::sin(p[0] + ph);
    });
    const Grid g = build_grid(s, 256);
    double cmin = 1e300, cmean = 0;
    for (int i = 0; i < g.n_free; ++i) {
      const double v = s.c(g.point_of_free(i));
      cmin = std::min(cmin, v);
      cmean += v * g.qw_free(i);
    }
    cmean /= g.total_weight();
    for (double eps : {0.3, 0.05, 0.01}) {
      const OperatorMatrix op = assemble_operator(s, g, eps);
      const EigenPair p = principal_eigenpair(op, g, {1e-11, 20000});
      CHECK(p.lambda >= cmin - 1e-10);
      CHECK(p.lambda <= cmean + 1e-10);
    }
  }
}

TEST_CASE("lambda is nonincreasing as eps decreases (no drift)") {
  const ScenarioSpec s = builtin_scenario("double-well-1d");
  SweepOptions opts;
  opts.resolution = 1025;
  const SweepResult sw =
      sweep(s, {0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001}, opts);
  double prev = 1e300;
  for (const auto& p : sw.points) {
    REQUIRE(p.ok);
    CHECK(p.pair.lambda <= prev + 1e-12);
    prev = p.pair.lambda;
  }
}

TEST_CASE("eigenpair invariants: positivity, normalization, residual") {
  const ScenarioSpec s = builtin_scenario("quartic-well-1d");
  const Grid g = build_grid(s, 1025);
  const OperatorMatrix op = assemble_operator(s, g, 0.01);
  const EigenPair p = principal_eigenpair(op, g, {1e-11, 20000});
  double umin = 1e300, qn = 0;
  for (int i = 0; i < g.n_free; ++i) {
    umin = std::min(umin, p.u[i]);
    qn += g.qw_free(i) * p.u[i] * p.u[i];
  }
  CHECK(umin > 0.0);
  CHECK(qn == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.residual <= 1e-10);
}

TEST_CASE("grid independence in the resolved regime") {
  const ScenarioSpec s = builtin_scenario("quartic-well-1d");
  const double eps = 0.01;
  const double tol = 1e-9;
  double lam[2];
  int k = 0;
  for (int n : {4097, 8193}) {
    const Grid g = build_grid(s, n);
    const OperatorMatrix op = assemble_operator(s, g, eps);
    lam[k++] = principal_eigenpair(op, g, {tol, 20000}).lambda;
  }
  CHECK(std::abs(lam[0] - lam[1]) < 100 * tol);
}

TEST_CASE("warm start beats cold start on total iterations") {
  const ScenarioSpec s = builtin_scenario("double-well-1d");
  const std::vector<double> ladder = {0.02, 0.014, 0.01, 0.007, 0.005};
  SweepOptions warm;
  warm.resolution = 1025;
  SweepOptions cold = warm;
  cold.warm_start = false;
  const SweepResult a = sweep(s, ladder, warm);
  const SweepResult b = sweep(s, ladder, cold);
  CHECK(a.total_iterations < b.total_iterations);
}

TEST_CASE("single-eps sweep on a constant scenario") {
  const ScenarioSpec s = torus1d(1.0, [](const Pt&) { return 4.0; });
  SweepOptions opts;
  opts.resolution = 64;
  const SweepResult sw = sweep(s, {0.1}, opts);
  REQUIRE(sw.points.size() == 1);
  CHECK(sw.points[0].ok);
  CHECK(sw.points[0].pair.lambda == doctest::Approx(4.0).epsilon(1e-11));
}

TEST_CASE("independent oracle agrees with the solver on a blown-up well") {
  // -w'' + y^2 w on a large box: ground energy 1 (oracle), and the 1D
  // solver reproduces it through the eps-scaled problem
  const double oracle =
      oracles::ground_energy_1d([](double y) { return y * y; }, 10.0, 2000);
  CHECK(oracle == doctest::Approx(1.0).epsilon(1e-6));

  const ScenarioSpec s = builtin_scenario("harmonic-1d");
  const double eps = 4e-3;
  const Grid g = build_grid(s, 4097);
  const OperatorMatrix op = assemble_operator(s, g, eps);
  const EigenPair p = principal_eigenpair(op, g, {1e-12, 20000});
  // lambda = 1 + sqrt(eps) * (oscillator ground energy)
  CHECK((p.lambda - 1.0) / std::sqrt(eps) ==
        doctest::Approx(oracle).epsilon(1e-5));
}

TEST_CASE("iterative inner solver matches sparse LU on a 2D problem") {
  ScenarioSpec s;
  s.domain = {DomainKind::flat_torus, 2, {{{0, 1}, {0, 1}}},
              {BoundaryKind::periodic, BoundaryKind::periodic}};
  s.c = [](const Pt& p) {
    return 2.0 + 0.5 * std::sin(2 * kPi * p[0]) * std::cos(2 * kPi * p[1]);
  };
  const Grid g = build_grid(s, 96, 96);
  const OperatorMatrix op = assemble_operator(s, g, 0.02);
  SolveOptions lu;
  lu.tol = 1e-10;
  SolveOptions it = lu;
  it.iterative_threshold = 1000;  // force the preconditioned path
  const EigenPair a = principal_eigenpair(op, g, lu);
  const EigenPair b = principal_eigenpair(op, g, it);
  CHECK(std::abs(a.lambda - b.lambda) < 1e-8);
}

TEST_CASE("2D gradient scenario lands near its pressure value") {
  const ScenarioSpec s = builtin_scenario("gradient-2d");
  SweepOptions opts;
  opts.resolution = 161;
  const SweepResult sw = sweep(s, {0.04}, opts);
  REQUIRE(sw.points[0].ok);
  CHECK(sw.gauge_used);
  // pressure = 2 - sin(pi/4)/2 with O(eps) corrections at eps = 0.04
  const double pr = 2.0 - 0.5 * std::sqrt(0.5);
  CHECK(sw.points[0].pair.lambda == doctest::Approx(pr).epsilon(0.08));
}

TEST_CASE("layer-resolution rule attaches a warning, not a failure") {
  const ScenarioSpec s = builtin_scenario("double-well-1d");
  const Grid coarse = build_grid(s, 33, 0, 1e-4);
  CHECK_FALSE(coarse.warnings.empty());
  const Grid fine = build_grid(s, 4097, 0, 1e-3);
  CHECK(fine.warnings.empty());
}

TEST_CASE("sweep flags per-eps failures without aborting") {
  const ScenarioSpec s = builtin_scenario("harmonic-1d");
  SweepOptions opts;
  opts.resolution = 257;
  opts.solve.max_iter = 1;  // force non-convergence
  const SweepResult sw = sweep(s, {0.1, 0.05}, opts);
  CHECK(sw.points.size() == 2);
  CHECK_FALSE(sw.points[0].ok);
  CHECK_FALSE(sw.points[1].ok);
  CHECK(sw.points[0].message.find("no convergence") != std::string::npos);
}
