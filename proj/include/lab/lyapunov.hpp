#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "lab/point.hpp"
#include "lab/scenario.hpp"

namespace lab {

// Solution of A D + D* A = -mu A^2 for a stable linearization D, via the
// constructive integral A^{-1} = mu int_0^inf e^{tD} e^{tD*} dt (this
// factor order is the one that makes the residual of the displayed
// equation vanish; see the README notes on conventions).
struct LyapunovMatrix {
  Eigen::MatrixXcd D;
  double mu = 1;
  Eigen::MatrixXcd A;      // Hermitian positive definite
  double residual = 0;     // ||AD + D*A + mu A^2||_F
  double min_eig_A = 0;
};

LyapunovMatrix solve_lyapunov(const Eigen::MatrixXcd& D, double mu);
LyapunovMatrix solve_lyapunov(const Eigen::MatrixXd& D, double mu);

// Local Lyapunov data at a hyperbolic point or planar circular cycle.
// The certified positivity functional uses the full field:
//   psi(x) = (|grad L|^2 + 2 <grad L, b>) / 4 ,
// with b replaced by -b at repellors (the construction time-reverses).
struct LocalLyapunov {
  Pt center{0, 0};
  int dim = 1;
  bool repellor = false;
  bool cycle = false;
  double r0 = 0, beta = 0;   // cycle case: L = beta (r - r0)^2
  Eigen::MatrixXd A;         // point case quadratic form
  ScalarFn L;
  VectorFn grad_L;
  ScalarFn psi;
  double validity_radius = 0;
  double min_psi_sampled = 0;  // over the punctured sample set
};

// Builds L(x) = <A (x - P), (x - P)> from the finite-difference
// linearization of b at P. Attractors use D = J, repellors D = -J;
// a saddle raises (the stable/unstable splitting is analytic input,
// not built numerically).
LocalLyapunov local_lyapunov_point(const VectorFn& b, const Pt& P, double mu,
                                   int dim, double validity_radius = 0.5);

// Planar circular-cycle certificate for L = beta (r - r0)^2 on the band
// |r - r0| <= band, sampled on an (r, theta) lattice. Throws when a
// sample off the cycle has psi <= 0, reporting the sample and suggesting
// a larger beta.
LocalLyapunov local_lyapunov_cycle_planar(const VectorFn& b_polar, double r0,
                                          double beta, double band,
                                          int n_r = 41, int n_theta = 32);

// Omega = b - grad L plus the sampled sign pattern of the decomposition
// functional psi_omega = |grad L|^2/4 + <grad L, Omega>/2 (informational:
// the shipped cycle L is certified under the full-field form, and the two
// differ by |grad L|^2/2).
struct FieldDecomposition {
  VectorFn omega;
  int n_pos = 0, n_neg = 0, n_zero = 0;
  double min_psi_omega = 0;
  double min_psi_full = 0;
  Pt argmin{0, 0};
};

FieldDecomposition decompose_field(const VectorFn& b, const ScalarFn& L,
                                   const VectorFn& grad_L,
                                   const std::vector<Pt>& samples, int dim);

struct DescentTrajectory {
  Pt start{0, 0};
  double max_increment = 0;   // largest positive step-to-step change of L
  bool escaped = false;       // left the validity ball; rest still reported
  double final_L = 0;
};

struct DescentReport {
  std::vector<DescentTrajectory> trajectories;
  double max_increment = 0;   // over non-escaped trajectories
};

// Integrates dx/dt = b with an embedded adaptive Runge-Kutta pair and
// tracks L along each trajectory.
DescentReport descent_check(const ScalarFn& L, const VectorFn& b,
                            const std::vector<Pt>& starts, double horizon,
                            double tol, int dim,
                            std::optional<std::pair<Pt, double>> validity = {});

// Convenience: -dL/dt = -<grad L, b> at a point (descent rate).
double descent_rate(const LocalLyapunov& loc, const VectorFn& b, const Pt& x,
                    int dim);

}  // namespace lab
