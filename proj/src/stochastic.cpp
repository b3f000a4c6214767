#include "lab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "lab/asymptotics.hpp"
#include "lab/rng.hpp"

namespace lab {

int worker_count() {
  if (const char* env = std::getenv("LAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

McEstimate simulate_fk(const Fn1& drift, const Fn1& sigma, const Fn1& kill,
                       double x0, double t, ExitBall ball, double dt,
                       long long n_paths, std::uint64_t seed) {
  if (!(dt > 0) || dt > t / 100.0 + 1e-15)
    throw std::invalid_argument("simulate_fk: need dt <= t/100");
  if (n_paths < 1000)
    throw std::invalid_argument("simulate_fk: need n_paths >= 1000");

  const long long n_steps = static_cast<long long>(std::ceil(t / dt - 1e-12));

  auto run_path = [&](std::uint64_t index) -> double {
    GaussianRng rng(seed, index);
    double x = x0;
    double integral = 0;
    double kprev = kill ? kill(x) : 0.0;
    double remaining = t;
    for (long long s = 0; s < n_steps; ++s) {
      const double step = std::min(dt, remaining);
      const double z = rng.normal();
      x += (drift ? drift(x) * step : 0.0) +
           (sigma ? sigma(x) : 1.0) * std::sqrt(step) * z;
      if (ball.radius > 0 && std::abs(x - ball.center) > ball.radius)
        return 0.0;  // killed by exit before t
      const double know = kill ? kill(x) : 0.0;
      integral += 0.5 * (kprev + know) * step;
      kprev = know;
      remaining -= step;
    }
    return std::exp(-integral);
  };

  // fixed-size chunks, partial sums combined in index order: the reduction
  // is deterministic for any worker count
  const int workers = std::max(1, worker_count());
  const long long chunk = 4096;
  const long long n_chunks = (n_paths + chunk - 1) / chunk;
  std::vector<double> sum1(n_chunks, 0.0), sum2(n_chunks, 0.0);

  auto run_chunks = [&](long long c0, long long c1) {
    for (long long c = c0; c < c1; ++c) {
      double s1 = 0, s2 = 0;
      const long long lo = c * chunk;
      const long long hi = std::min(n_paths, lo + chunk);
      for (long long p = lo; p < hi; ++p) {
        const double y = run_path(static_cast<std::uint64_t>(p));
        s1 += y;
        s2 += y * y;
      }
      sum1[c] = s1;
      sum2[c] = s2;
    }
  };

  if (workers == 1 || n_chunks == 1) {
    run_chunks(0, n_chunks);
  } else {
    std::vector<std::thread> pool;
    const long long per = (n_chunks + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long long c0 = w * per;
      const long long c1 = std::min(n_chunks, c0 + per);
      if (c0 >= c1) break;
      pool.emplace_back(run_chunks, c0, c1);
    }
    for (auto& th : pool) th.join();
  }

  double s1 = 0, s2 = 0;
  for (long long c = 0; c < n_chunks; ++c) {
    s1 += sum1[c];
    s2 += sum2[c];
  }
  McEstimate est;
  est.count = n_paths;
  est.seed = seed;
  est.mean = s1 / n_paths;
  const double var =
      std::max(0.0, (s2 - n_paths * est.mean * est.mean) / (n_paths - 1));
  est.std_error = std::sqrt(var / n_paths);
  return est;
}

CoupledEstimate simulate_fk_coupled(const Fn1& drift, const Fn1& sigma,
                                    const Fn1& kill, double x0, double t,
                                    ExitBall ball, double dt, long long n_paths,
                                    std::uint64_t seed) {
  if (!(dt > 0) || dt > t / 100.0 + 1e-15)
    throw std::invalid_argument("simulate_fk_coupled: need dt <= t/100");
  if (n_paths < 1000)
    throw std::invalid_argument("simulate_fk_coupled: need n_paths >= 1000");

  const long long n_coarse = static_cast<long long>(std::round(t / dt));
  const double dtc = t / n_coarse;
  const double dtf = 0.5 * dtc;
  const double sq_f = std::sqrt(dtf);

  struct PathPair {
    double coarse, fine;
  };

  auto run_path = [&](std::uint64_t index) -> PathPair {
    GaussianRng rng(seed, index);
    double xc = x0, xf = x0;
    double ic = 0, iff = 0;
    double kc_prev = kill ? kill(xc) : 0.0;
    double kf_prev = kc_prev;
    bool alive_c = true, alive_f = true;
    for (long long s = 0; s < n_coarse; ++s) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      if (alive_f) {
        for (int half = 0; half < 2; ++half) {
          const double z = half == 0 ? z1 : z2;
          xf += (drift ? drift(xf) * dtf : 0.0) + (sigma ? sigma(xf) : 1.0) * sq_f * z;
          if (ball.radius > 0 && std::abs(xf - ball.center) > ball.radius) {
            alive_f = false;
            break;
          }
          const double know = kill ? kill(xf) : 0.0;
          iff += 0.5 * (kf_prev + know) * dtf;
          kf_prev = know;
        }
      }
      if (alive_c) {
        const double zc = (z1 + z2) / std::sqrt(2.0);
        xc += (drift ? drift(xc) * dtc : 0.0) +
              (sigma ? sigma(xc) : 1.0) * std::sqrt(dtc) * zc;
        if (ball.radius > 0 && std::abs(xc - ball.center) > ball.radius)
          alive_c = false;
        else {
          const double know = kill ? kill(xc) : 0.0;
          ic += 0.5 * (kc_prev + know) * dtc;
          kc_prev = know;
        }
      }
      if (!alive_c && !alive_f) break;
    }
    return {alive_c ? std::exp(-ic) : 0.0, alive_f ? std::exp(-iff) : 0.0};
  };

  const int workers = std::max(1, worker_count());
  const long long chunk = 4096;
  const long long n_chunks = (n_paths + chunk - 1) / chunk;
  std::vector<double> sc1(n_chunks, 0), sc2(n_chunks, 0), sf1(n_chunks, 0),
      sf2(n_chunks, 0), sd1(n_chunks, 0), sd2(n_chunks, 0);

  auto run_chunks = [&](long long c0, long long c1) {
    for (long long c = c0; c < c1; ++c) {
      double a1 = 0, a2 = 0, b1 = 0, b2 = 0, d1 = 0, d2 = 0;
      const long long lo = c * chunk;
      const long long hi = std::min(n_paths, lo + chunk);
      for (long long p = lo; p < hi; ++p) {
        const PathPair y = run_path(static_cast<std::uint64_t>(p));
        a1 += y.coarse;
        a2 += y.coarse * y.coarse;
        b1 += y.fine;
        b2 += y.fine * y.fine;
        const double d = y.coarse - y.fine;
        d1 += d;
        d2 += d * d;
      }
      sc1[c] = a1;
      sc2[c] = a2;
      sf1[c] = b1;
      sf2[c] = b2;
      sd1[c] = d1;
      sd2[c] = d2;
    }
  };

  if (workers == 1 || n_chunks == 1) {
    run_chunks(0, n_chunks);
  } else {
    std::vector<std::thread> pool;
    const long long per = (n_chunks + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long long c0 = w * per;
      const long long c1 = std::min(n_chunks, c0 + per);
      if (c0 >= c1) break;
      pool.emplace_back(run_chunks, c0, c1);
    }
    for (auto& th : pool) th.join();
  }

  auto finish = [&](const std::vector<double>& s1v, const std::vector<double>& s2v) {
    double s1 = 0, s2 = 0;
    for (long long c = 0; c < n_chunks; ++c) {
      s1 += s1v[c];
      s2 += s2v[c];
    }
    McEstimate est;
    est.count = n_paths;
    est.seed = seed;
    est.mean = s1 / n_paths;
    const double var =
        std::max(0.0, (s2 - n_paths * est.mean * est.mean) / (n_paths - 1));
    est.std_error = std::sqrt(var / n_paths);
    return est;
  };

  CoupledEstimate out;
  out.coarse = finish(sc1, sc2);
  out.fine = finish(sf1, sf2);
  const McEstimate d = finish(sd1, sd2);
  out.diff_mean = d.mean;
  out.diff_se = d.std_error;
  return out;
}

KernelCheck verify_kernel(double lam, double mu,
                          const std::vector<double>& x_list,
                          const std::vector<double>& t_list, long long n_paths,
                          double dt, std::uint64_t seed) {
  if (!(lam > 0)) throw std::invalid_argument("verify_kernel: lambda > 0");
  KernelCheck out;
  out.lambda = lam;
  out.mu = mu;
  out.n_paths = n_paths;
  out.dt = dt;

  const Fn1 kill = [lam, mu](double x) { return lam * (x * x + mu * x); };
  std::uint64_t stream = 0;
  for (double t : t_list) {
    for (double x : x_list) {
      KernelCheckRow row;
      row.x = x;
      row.t = t;
      row.closed_form = fk_kernel(lam, mu, x, t);
      const double dt_use = std::min(dt, t / 100.0);
      CoupledEstimate est = simulate_fk_coupled({}, {}, kill, x, t, {0, 0},
                                                dt_use, n_paths,
                                                seed + 1000 * stream);
      row.mc_mean = est.coarse.mean;
      row.mc_se = est.coarse.std_error;
      row.z = (est.coarse.mean - row.closed_form) / est.coarse.std_error;
      row.dt_shift = std::abs(est.diff_mean);
      row.dt_shift_over_se = row.dt_shift / est.coarse.std_error;
      if (std::abs(row.z) > 4.0) {
        // a large z at this budget usually signals dt bias: retry once at dt/2
        row.retried = true;
        est = simulate_fk_coupled({}, {}, kill, x, t, {0, 0}, 0.5 * dt_use,
                                  n_paths, seed + 1000 * stream + 7);
        row.mc_mean = est.coarse.mean;
        row.mc_se = est.coarse.std_error;
        row.z = (est.coarse.mean - row.closed_form) / est.coarse.std_error;
        row.dt_shift = std::abs(est.diff_mean);
        row.dt_shift_over_se = row.dt_shift / est.coarse.std_error;
        if (std::abs(row.z) > 4.0) out.flagged = true;
      }
      out.max_abs_z = std::max(out.max_abs_z, std::abs(row.z));
      out.rows.push_back(row);
      ++stream;
    }
  }
  return out;
}

}  // namespace lab
