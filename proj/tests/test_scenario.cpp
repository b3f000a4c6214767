#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lab/rng.hpp"
#include "lab/scenario.hpp"
#include "lab/scenario_library.hpp"

using namespace lab;

namespace {

ScenarioSpec quartic_example(double declared_min) {
  // c = (x^2 - 1)^2 + 1 with a configurable declared minimum
  ScenarioSpec s;
  s.domain = {DomainKind::interval, 1, {{{-2, 2}, {0, 1}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
  s.c = [](const Pt& p) {
    const double q = p[0] * p[0] - 1.0;
    return q * q + 1.0;
  };
  CriticalPointData p;
  p.location = pt(declared_min);
  p.value = 1.0;
  p.quad = {4};
  s.critical_points = {p};
  return s;
}

}  // namespace

TEST_CASE("declared minima of the quartic example pass the probe") {
  ScenarioSpec s = quartic_example(1.0);
  CriticalPointData left;
  left.location = pt(-1);
  left.value = 1.0;
  left.quad = {4};
  s.critical_points.push_back(left);
  const ValidationReport rep = validate_scenario(s);
  CHECK(rep.ok());
}

TEST_CASE("misplaced declared minimum is rejected with the gradient value") {
  const ScenarioSpec s = quartic_example(0.5);
  // grad c (0.5) = 4 * 0.5 * (0.25 - 1) = -1.5
  CHECK(critical_point_gradient_norm(s, s.critical_points[0]) ==
        doctest::Approx(1.5).epsilon(1e-9));
  const ValidationReport rep = validate_scenario(s);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("non-positive potential is rejected") {
  ScenarioSpec s;
  s.domain = {DomainKind::flat_torus, 1, {{{-1, 1}, {0, 1}}},
              {BoundaryKind::periodic, BoundaryKind::periodic}};
  s.c = [](const Pt& p) { return p[0] * p[0]; };  // zero at the origin
  const ValidationReport rep = validate_scenario(s);
  CHECK_FALSE(rep.ok());
  bool found = false;
  for (const auto& c : rep.checks)
    if (c.name == "c-strictly-positive" && !c.pass) found = true;
  CHECK(found);
}

TEST_CASE("symmetrization is idempotent") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 25; ++trial) {
    SymTensor3 t(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) t.at(i, j, k) = rng.next_double() - 0.5;
    const SymTensor3 s1 = t.symmetrized();
    const SymTensor3 s2 = s1.symmetrized();
    CHECK(s1.asymmetry() <= 1e-15);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          CHECK(s1.at(i, j, k) == doctest::Approx(s2.at(i, j, k)).epsilon(1e-14));
  }
}

TEST_CASE("ordered coefficients match a hand Taylor expansion") {
  // 5 t^2 + 6 t^3 + 2.25 t^4 near +1 for c = 1 + (x^2-1)^2 (1 + x/4)
  const ScenarioSpec s = builtin_scenario("asymmetric-well-1d");
  const auto& p = s.critical_points[1];
  CHECK(p.location[0] == doctest::Approx(1.0));
  CHECK(p.quad[0] == doctest::Approx(5.0));
  CHECK(p.cubic_ord(0, 0, 0) == doctest::Approx(6.0));
  CHECK(p.quartic_ord(0, 0, 0, 0) == doctest::Approx(2.25));

  // numerical cross-check of the declared Taylor data at the + well
  const double t = 1e-2;
  const double pred = p.value + p.quad[0] * t * t +
                      p.cubic_ord(0, 0, 0) * t * t * t +
                      p.quartic_ord(0, 0, 0, 0) * t * t * t * t;
  CHECK(s.c(pt(1.0 + t)) == doctest::Approx(pred).epsilon(1e-8));
}

TEST_CASE("gradient field consistency check catches a wrong b") {
  ScenarioSpec s = builtin_scenario("gradient-well-1d");
  s.field.b = [](const Pt& p) { return pt(2.0 * p[0]); };  // not grad(phi)
  const ValidationReport rep = validate_scenario(s);
  bool failed_consistency = false;
  for (const auto& c : rep.checks)
    if (c.name == "gradient-field-consistent" && !c.pass)
      failed_consistency = true;
  CHECK(failed_consistency);

  s.field.b = s.field.grad_phi;  // the right handle passes
  const ValidationReport rep2 = validate_scenario(s);
  for (const auto& c : rep2.checks)
    if (c.name == "gradient-field-consistent") CHECK(c.pass);
}

TEST_CASE("builtin scenarios validate and keep c positive on samples") {
  for (const auto& name : builtin_scenario_names()) {
    const ScenarioSpec s = builtin_scenario(name);
    const ValidationReport rep = validate_scenario(s);
    INFO(name, "\n", rep.summary());
    CHECK(rep.ok());
  }
}

TEST_CASE("scenario files round through the parametric forms") {
  const std::string text = R"(
name = file-check
[domain]
kind = interval
xmin = -2
xmax = 2
[potential]
form = tilted-double-well
a = 1
b = 0.25
w = 1
c0 = 1
[point]
location = -1
value = 1
quad = 3
cubic = -2
quartic = -0.25
[point]
location = 1
value = 1
quad = 5
cubic = 6
quartic = 2.25
)";
  const ScenarioSpec s = scenario_from_ini(IniFile::parse(text));
  CHECK(s.critical_points.size() == 2);
  CHECK(validate_scenario(s).ok());
  const ScenarioSpec ref = builtin_scenario("asymmetric-well-1d");
  for (double x : {-1.7, -0.3, 0.9, 1.9})
    CHECK(s.c(pt(x)) == doctest::Approx(ref.c(pt(x))).epsilon(1e-14));
}

TEST_CASE("unknown scenario name lists the catalog") {
  CHECK_THROWS_WITH_AS(builtin_scenario("nope"),
                       doctest::Contains("available"), std::invalid_argument);
}
