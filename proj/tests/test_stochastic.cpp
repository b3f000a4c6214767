#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lab/asymptotics.hpp"
#include "lab/stochastic.hpp"

using namespace lab;

TEST_CASE("no killing and no exit gives exactly one") {
  const McEstimate est =
      simulate_fk({}, {}, {}, 0.3, 1.0, {0, 0}, 0.01, 2000, 42);
  CHECK(est.mean == doctest::Approx(1.0));
  CHECK(est.std_error == doctest::Approx(0.0));
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(simulate_fk({}, {}, {}, 0, 1.0, {0, 0}, 0.5, 2000, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_fk({}, {}, {}, 0, 1.0, {0, 0}, 0.001, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("unit-diffusion estimate matches the closed form within 3 se") {
  const double lam = 0.5, mu = 1.0, x = 0.25, t = 0.5;
  const Fn1 kill = [lam, mu](double y) { return lam * (y * y + mu * y); };
  const McEstimate est =
      simulate_fk({}, {}, kill, x, t, {0, 0}, 5e-4, 40000, 7);
  const double closed = fk_kernel(lam, mu, x, t);
  CHECK(std::abs(est.mean - closed) <= 3.0 * est.std_error);
}

TEST_CASE("doubling the path count shrinks the standard error like sqrt(2)") {
  const Fn1 kill = [](double y) { return 0.5 * y * y; };
  const McEstimate a = simulate_fk({}, {}, kill, 0, 0.5, {0, 0}, 1e-3, 20000, 3);
  const McEstimate b = simulate_fk({}, {}, kill, 0, 0.5, {0, 0}, 1e-3, 40000, 3);
  CHECK(a.std_error / b.std_error == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
}

TEST_CASE("deterministic for a fixed seed, independent of worker count") {
  const Fn1 kill = [](double y) { return y * y; };
  setenv("LAB_WORKERS", "1", 1);
  const McEstimate a = simulate_fk({}, {}, kill, 0.1, 0.4, {0, 0}, 1e-3, 5000, 9);
  setenv("LAB_WORKERS", "4", 1);
  const McEstimate b = simulate_fk({}, {}, kill, 0.1, 0.4, {0, 0}, 1e-3, 5000, 9);
  unsetenv("LAB_WORKERS");
  CHECK(a.mean == b.mean);  // bit-identical
  CHECK(a.std_error == b.std_error);
}

TEST_CASE("exit-time monotonicity: shrinking the ball cannot raise survival") {
  const McEstimate big =
      simulate_fk({}, {}, {}, 0.0, 1.0, {0, 2.0}, 1e-3, 4000, 5);
  const McEstimate small =
      simulate_fk({}, {}, {}, 0.0, 1.0, {0, 1.0}, 1e-3, 4000, 5);
  CHECK(small.mean <= big.mean + 1e-15);
}

TEST_CASE("seed-change sanity: standardized means look standard normal") {
  // KS distance of 10 standardized means against the normal CDF
  const double lam = 1.0;
  const Fn1 kill = [lam](double y) { return lam * y * y; };
  std::vector<double> z;
  const double truth = fk_kernel(lam, 0, 0, 0.5);
  for (int s = 0; s < 10; ++s) {
    const McEstimate est =
        simulate_fk({}, {}, kill, 0, 0.5, {0, 0}, 2.5e-3, 10000, 1000 + s);
    z.push_back((est.mean - truth) / est.std_error);
  }
  std::sort(z.begin(), z.end());
  auto phi = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };
  double d = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    d = std::max(d, std::abs(phi(z[i]) - (i + 1) / 10.0));
    d = std::max(d, std::abs(phi(z[i]) - i / 10.0));
  }
  // critical value for n = 10 at p = 0.01 is about 0.489
  CHECK(d < 0.489);
}

TEST_CASE("coupled halving: bias below one standard error once converged") {
  const double lam = 2.0, mu = 1.0;
  const Fn1 kill = [lam, mu](double y) { return lam * (y * y + mu * y); };
  const CoupledEstimate ce =
      simulate_fk_coupled({}, {}, kill, 0.0, 1.0, {0, 0}, 1e-3, 30000, 11);
  CHECK(std::abs(ce.diff_mean) < ce.coarse.std_error);
  // and both halves agree with the closed form
  const double closed = fk_kernel(lam, mu, 0.0, 1.0);
  CHECK(std::abs(ce.coarse.mean - closed) <= 3.5 * ce.coarse.std_error);
  CHECK(std::abs(ce.fine.mean - closed) <= 3.5 * ce.fine.std_error);
}

TEST_CASE("kernel verification table") {
  const KernelCheck chk =
      verify_kernel(0.5, 0.0, {0.0, 0.5}, {0.05, 0.25, 1.0}, 20000, 2e-3, 21);
  REQUIRE(chk.rows.size() == 6);
  CHECK(chk.max_abs_z <= 4.0);
  CHECK_FALSE(chk.flagged);
  for (const auto& r : chk.rows) {
    CHECK(r.closed_form == doctest::Approx(fk_kernel(0.5, 0.0, r.x, r.t)));
    CHECK(r.mc_se > 0.0);
  }
  // both columns approach 1 as t -> 0+
  CHECK(chk.rows[0].closed_form > 0.99);
  CHECK(chk.rows[0].mc_mean > 0.99);
}
