#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lab {

using Fn1 = std::function<double(double)>;

struct McEstimate {
  double mean = 0;
  double std_error = 0;   // sample stdev / sqrt(count)
  long long count = 0;
  std::uint64_t seed = 0;
};

struct ExitBall {
  double center = 0;
  double radius = 0;  // <= 0 means whole space (no exit)
};

// Euler-Maruyama estimate of E_x[ chi_(t < tau) exp(-int_0^t kill(X_s) ds) ]
// for dX = drift dt + sigma dW. The killing integral uses the trapezoid
// along the path; exit is detected from the post-step position. Paths are
// seeded per index, so the result is bit-identical for any worker count.
McEstimate simulate_fk(const Fn1& drift, const Fn1& sigma, const Fn1& kill,
                       double x0, double t, ExitBall ball, double dt,
                       long long n_paths, std::uint64_t seed);

// Same Brownian path discretized at dt and dt/2 (the coarse increments
// are sums of consecutive fine ones), so the difference of the two
// estimates isolates the time-step bias from the sampling noise.
struct CoupledEstimate {
  McEstimate coarse;   // step dt
  McEstimate fine;     // step dt/2
  double diff_mean = 0;
  double diff_se = 0;
};

CoupledEstimate simulate_fk_coupled(const Fn1& drift, const Fn1& sigma,
                                    const Fn1& kill, double x0, double t,
                                    ExitBall ball, double dt, long long n_paths,
                                    std::uint64_t seed);

struct KernelCheckRow {
  double x = 0, t = 0;
  double closed_form = 0;
  double mc_mean = 0, mc_se = 0;
  double z = 0;
  double dt_shift = 0;        // |mean(dt) - mean(dt/2)| from the coupled run
  double dt_shift_over_se = 0;
  bool retried = false;   // |z| > 4 triggered one dt/2 retry
};

struct KernelCheck {
  std::vector<KernelCheckRow> rows;
  double max_abs_z = 0;
  bool flagged = false;   // some |z| > 4 survived the retry
  double lambda = 0, mu = 0;
  long long n_paths = 0;
  double dt = 0;
};

// Monte-Carlo verification of the closed-form kernel: the process is the
// standard Brownian motion of the closed form (unit diffusion, generator
// d^2/(2 dx^2)) with killing rate lam (x^2 + mu x).
KernelCheck verify_kernel(double lam, double mu,
                          const std::vector<double>& x_list,
                          const std::vector<double>& t_list, long long n_paths,
                          double dt, std::uint64_t seed);

// Worker count for the path loop: LAB_WORKERS, else hardware concurrency.
int worker_count();

}  // namespace lab
