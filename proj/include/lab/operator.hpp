#pragma once

#include <Eigen/SparseCore>
#include <string>

#include "lab/grid.hpp"
#include "lab/scenario.hpp"

namespace lab {

enum class AssemblyMode { central, upwind };

// Discrete form of -eps * laplacian + b . grad + c on the free nodes,
// written with the ordinary (analyst's) laplacian so the sign matches
// the positive-operator convention used throughout.
struct OperatorMatrix {
  Eigen::SparseMatrix<double> A;
  double eps = 0;
  AssemblyMode mode = AssemblyMode::upwind;

  // Upwind drift keeps all off-diagonal entries <= 0; with c > 0 the
  // matrix is then strictly diagonally dominant (M-matrix).
  bool is_m_matrix(double* worst_offdiag = nullptr) const;
  double max_cell_peclet = 0;  // max |b| h / (2 eps) seen during assembly
};

OperatorMatrix assemble_operator(const ScenarioSpec& spec, const Grid& grid,
                                 double eps,
                                 AssemblyMode mode = AssemblyMode::upwind);

// Coordinate text dump (row col value), one entry per line.
void dump_matrix(const OperatorMatrix& op, const std::string& path);

// Ground-state transform for gradient drifts: with u = exp(phi/(2 eps)) v
// the drift term drops out and the eigenvalue is preserved. The returned
// problem reads eps^2 * (-lap) v + c_eps v = (eps lambda) v with
//   c_eps = eps c - eps lap(phi)/2 + |grad phi|^2 / 4,
// obtained by direct substitution (see README on sign conventions).
struct GaugeTransformed {
  ScenarioSpec transformed;     // drift-free scenario with potential c_eps
  double solve_eps;             // assemble with this value (= eps^2)
  double eigenvalue_scale;      // multiply the solved eigenvalue by this (= 1/eps)
  double eps_original;
};

GaugeTransformed gauge_transform(const ScenarioSpec& spec, double eps);

// Node masses proportional to exp(-w/eps) u^2 dvol, normalized to sum 1.
// Computed in log space with max subtraction so eps <= 1e-3 cannot
// underflow the whole vector.
std::vector<double> weighted_measure(const std::vector<double>& u_free,
                                     const ScalarFn& weight_exponent,
                                     double eps, const Grid& grid);

}  // namespace lab
