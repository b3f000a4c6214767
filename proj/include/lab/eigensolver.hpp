#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lab/operator.hpp"

namespace lab {

struct EigenPair {
  double lambda = 0;
  std::vector<double> u;   // free-node values, quadrature-normalized, > 0
  double residual = 0;     // ||A u - lambda u||_2 / ||u||_2
  int iterations = 0;
};

// Principal (smallest, Perron) eigenpair by shift-invert power iteration
// with shift zero: A is invertible since c > 0, and for an M-matrix the
// inverse is nonnegative, so the iteration converges from any positive
// start. Inner solves use sparse LU; systems above `iterative_threshold`
// unknowns switch to BiCGSTAB with an incomplete-LU preconditioner.
struct SolveOptions {
  double tol = 1e-10;
  int max_iter = 20000;
  std::vector<double> warm_start;  // empty = deterministic all-ones start
  int iterative_threshold = 150000;
};

EigenPair principal_eigenpair(const OperatorMatrix& A, const Grid& grid,
                              const SolveOptions& opts = {});

struct SweepPoint {
  double eps = 0;
  EigenPair pair;
  bool ok = false;
  std::string message;     // failure reason when !ok
  double sup_u = 0;        // max over free nodes
  Pt argmax{0, 0};         // parabolic refinement of the max node
};

struct SweepOptions {
  int resolution = 0;      // 0 = library default for the scenario
  int resolution_y = 0;
  AssemblyMode mode = AssemblyMode::upwind;
  SolveOptions solve;
  bool warm_start = true;
  // Gradient-of-phi scenarios solve the gauge-transformed (drift-free)
  // problem by default: second-order accurate and directly yields the
  // weighted eigenfunction. Set false to solve the drift form as given.
  bool use_gauge_for_gradient = true;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  Grid grid;
  bool gauge_used = false;  // points carry v = exp(-phi/2eps) u when true
  int total_iterations = 0;
};

// One converged eigenpair per eps (decreasing); the previous eigenvector
// seeds the next solve. Per-eps failures are flagged, not fatal.
SweepResult sweep(const ScenarioSpec& spec, const std::vector<double>& eps_list,
                  const SweepOptions& opts = {});

// Sub-grid argmax estimate: quadratic fit through the max node and its
// axis neighbors.
Pt refine_argmax(const Grid& grid, const std::vector<double>& u);

}  // namespace lab
