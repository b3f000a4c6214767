#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lab/point.hpp"

namespace lab {

enum class DomainKind { interval, box, flat_torus, annulus_polar, radial_interval };
enum class BoundaryKind { dirichlet_zero, periodic };
enum class FieldKind { zero, gradient_of_phi, general };

// Symmetric rank-3 coefficient holder. Stores the full m^3 tensor; the
// ordered accessor returns the coefficient of x_i x_j x_k (i<=j<=k) in a
// Taylor polynomial written over sorted multi-indices, i.e. the tensor
// entry times the number of index permutations.
class SymTensor3 {
 public:
  SymTensor3() = default;
  explicit SymTensor3(int m) : m_(m), t_(m * m * m, 0.0) {}

  int dim() const { return m_; }
  double& at(int i, int j, int k) { return t_[(i * m_ + j) * m_ + k]; }
  double at(int i, int j, int k) const { return t_[(i * m_ + j) * m_ + k]; }

  void set_ordered(int i, int j, int k, double coeff);
  double ordered(int i, int j, int k) const;

  SymTensor3 symmetrized() const;
  double asymmetry() const;  // max |t_ijk - t_perm| over permutations
  bool empty() const { return t_.empty(); }

 private:
  int m_ = 0;
  std::vector<double> t_;
};

class SymTensor4 {
 public:
  SymTensor4() = default;
  explicit SymTensor4(int m) : m_(m), t_(m * m * m * m, 0.0) {}

  int dim() const { return m_; }
  double& at(int i, int j, int k, int l) {
    return t_[((i * m_ + j) * m_ + k) * m_ + l];
  }
  double at(int i, int j, int k, int l) const {
    return t_[((i * m_ + j) * m_ + k) * m_ + l];
  }

  void set_ordered(int i, int j, int k, int l, double coeff);
  double ordered(int i, int j, int k, int l) const;

  SymTensor4 symmetrized() const;
  double asymmetry() const;
  bool empty() const { return t_.empty(); }

 private:
  int m_ = 0;
  std::vector<double> t_;
};

struct DomainSpec {
  DomainKind kind = DomainKind::interval;
  int dim = 1;
  // bounds[k] = {lo, hi}; for annulus_polar axis 0 is r, axis 1 is theta.
  std::array<std::array<double, 2>, 2> bounds{{{0, 1}, {0, 1}}};
  std::array<BoundaryKind, 2> boundary{BoundaryKind::dirichlet_zero,
                                       BoundaryKind::dirichlet_zero};

  double extent(int k) const { return bounds[k][1] - bounds[k][0]; }
  double diameter() const;
  double volume() const;
  bool contains(const Pt& p) const;
};

struct FieldSpec {
  FieldKind kind = FieldKind::zero;
  ScalarFn phi;                 // present iff gradient_of_phi
  VectorFn grad_phi;            // optional analytic gradient
  ScalarFn laplacian_phi;       // optional analytic laplacian
  VectorFn b;                   // present iff general (native components)
  ScalarFn lyapunov;            // required iff general
  VectorFn grad_lyapunov;       // optional analytic gradient of L

  // Drift components in the domain's native coordinates.
  Pt drift(const Pt& x, int dim) const;
};

struct CriticalPointData {
  Pt location{0, 0};
  double value = 0;                   // c(P)
  std::vector<double> quad;           // coefficients of x_k^2 in c - min c
  SymTensor3 cubic;                   // c_ijk
  SymTensor4 quartic0;                // c_ijkl(0)
  std::vector<double> hessian_phi;    // eigenvalues of Hess(phi) = field linearization
  double curvature_R = 0;             // scalar curvature at P (0 for flat)
  std::vector<double> curvature_Rijij;  // row-major m*m, zero diagonal
  std::vector<double> curvature_Ric;    // diagonal Ricci entries

  double cubic_ord(int i, int j, int k) const {
    return cubic.empty() ? 0.0 : cubic.ordered(i, j, k);
  }
  double quartic_ord(int i, int j, int k, int l) const {
    return quartic0.empty() ? 0.0 : quartic0.ordered(i, j, k, l);
  }
  double rijij(int i, int j, int m) const {
    return curvature_Rijij.empty() ? 0.0 : curvature_Rijij[i * m + j];
  }
};

// Closed curve metadata for limit-cycle scenarios (annulus family).
struct CycleSpec {
  double r0 = 1.0;       // cycle radius
  double period = 6.283185307179586476925286766559;
  // parametrization t -> native coordinates
  std::function<Pt(double)> parametrize;
};

struct ScenarioSpec {
  DomainSpec domain;
  ScalarFn c;
  FieldSpec field;
  std::vector<CriticalPointData> critical_points;
  std::vector<CycleSpec> cycles;
  std::string name;
  std::string description;
  bool curved = false;  // flat scenarios only in this artifact
  // Set on specs produced by the gauge transform: critical point metadata
  // is carried over for layer estimates but gradient probes do not apply.
  bool gauge_derived = false;
};

struct ValidationCheck {
  std::string name;
  bool pass = false;
  double residual = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
  std::string summary() const;
};

// Machine-verifies the declared structure: domain invariants, strict
// positivity of c on a probe grid, vanishing gradients at the declared
// points, tensor symmetry, flatness of curvature data, and the
// consistency of a user-supplied b with grad(phi) in the gradient case.
ValidationReport validate_scenario(const ScenarioSpec& spec);

// Gradient-vanishing probe used by validate_scenario (exposed for tests).
double critical_point_gradient_norm(const ScenarioSpec& spec,
                                    const CriticalPointData& p);

}  // namespace lab
