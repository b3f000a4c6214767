#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lab/eigensolver.hpp"
#include "lab/hermite.hpp"

namespace lab {

enum class MeasureKind { plain_u2, weighted_phi, weighted_L };
enum class ScaleCase { potential, gradient };  // eps^(1/4) vs eps^(1/2) blow-up

struct BlowupProfile {
  Pt center{0, 0};
  double scale_exponent = 0.25;
  double eps = 0;
  int dim = 1;
  int n_per_axis = 0;
  double y_radius = 0;
  std::vector<double> w;          // rescaled, divided by the global max
  std::vector<double> fitted_quad;  // coefficients a_k of exp(-a_k y_k^2 / 2)
  double fitted_amplitude = 0;
  bool fit_ok = false;
  std::string fit_message;
  double l2_distance = 0;         // to the normalized Gaussian target
  double w_min = 0, w_max = 0;

  Pt y_point(int flat_index) const;
};

// Interpolates u onto the y-grid x = P + eps^s y, divides by max u, fits
// the Gaussian by least squares on -2 log w restricted to w > 1e-8, and
// measures the normalized L2 distance to prod exp(-target_k y_k^2 / 2).
BlowupProfile extract_profile(const EigenPair& pair, const Grid& grid,
                              const Pt& center, double eps,
                              double scale_exponent, double y_radius,
                              const std::vector<double>& target_quad,
                              int n_per_axis = 81);

// Ball/band masses of the selected normalized measure.
struct RegionMass {
  std::string label;
  double mass = 0;
  double f = 0;           // sup over region / global sup of the plain function
  bool is_band = false;   // cycle band |r - r0| < delta
};

struct ConcentrationReport {
  std::vector<RegionMass> regions;
  double remainder = 0;   // mass off all regions
  double delta = 0;
  MeasureKind kind = MeasureKind::plain_u2;
};

double default_delta(const ScenarioSpec& spec);

ConcentrationReport concentration_masses(const EigenPair& pair,
                                         const ScenarioSpec& spec,
                                         const Grid& grid, double eps,
                                         double delta, MeasureKind kind);

// distance(argmax, P) tracks along a sweep plus the bound ratios the
// concentration estimates control: d^2/sqrt(eps) (potential case) or
// d^2/eps and d/sqrt(eps) (gradient case).
struct ArgmaxTrack {
  std::vector<double> eps;
  std::vector<double> d;
  std::vector<int> nearest;       // index of nearest declared point
  bool split = false;             // argmax alternates between points
  double fitted_exponent = 0;     // slope of log d vs log eps (d > 0 part)
  std::vector<double> bound_ratio;   // d^2 / eps^(1/2 or 1)
  bool bound_ok = false;          // ratios do not blow up toward small eps
  std::vector<double> d_over_sqrt;   // gradient case: d / sqrt(eps)
  bool d_over_sqrt_decreasing = false;  // over the last 4 points
};

ArgmaxTrack argmax_velocity(const SweepResult& sweep,
                            const std::vector<CriticalPointData>& points,
                            ScaleCase scase);

struct SupnormFit {
  double slope = 0;
  double expected = 0;  // -m/8 potential, -m/4 gradient
  double K = 0;         // sup^2 eps^(m/4 or m/2) at the smallest eps
  std::vector<double> eps, sup;
};

SupnormFit supnorm_growth(const SweepResult& sweep, ScaleCase scase, int dim,
                          int tail_points = 0);

struct DecayReport {
  std::vector<double> eps;
  std::vector<double> ratio;      // max_off u / max u
  std::vector<double> exponent;   // log(ratio)/log(eps)
  bool exponent_increasing = false;
  double margin = 0;
};

DecayReport decay_off_wells(const SweepResult& sweep, const ScenarioSpec& spec,
                            double margin);

struct ExpansionFit {
  double c0 = 0, c1 = 0, c2 = 0;
  double rms_residual = 0;
  double condition = 0;
  int n_points = 0;
  double eps_min = 0, eps_max = 0;
  bool ill_conditioned = false;  // condition > 1e8
};

// Least squares on the basis {1, sqrt(eps), eps}; needs at least 4
// converged points spanning a decade.
ExpansionFit fit_expansion(const std::vector<double>& eps,
                           const std::vector<double>& lambda);
ExpansionFit fit_expansion(const SweepResult& sweep);

// First blow-up correction: solves
//   L_P w1 = - sum_(i<=j<=k) c_ijk y_i y_j y_k w_P
// in the oscillator eigenbasis. The defining equation determines w1 up to
// a multiple of w_P; the ground coefficient is set to zero.
struct W1Row {
  std::array<int, 2> index;
  double coef_normalized;  // on unit-norm oscillator states
  double coef_h_basis;     // on prod h_n(quad^(1/4) y) with h_n = e^{x^2/2} (d/dx)^n e^{-x^2}
};

struct W1Correction {
  OscillatorExpansion w1;
  std::vector<W1Row> table;
  // max-norm residual of the defining equation with a fourth-order FD
  // laplacian on [-radius, radius]^m
  double residual_max(int nodes_per_axis, double radius = 8.0) const;
  const CriticalPointData* point = nullptr;
};

W1Correction w1_correction(const CriticalPointData& p);

}  // namespace lab
