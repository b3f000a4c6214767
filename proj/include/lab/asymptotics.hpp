#pragma once

#include <map>
#include <string>
#include <vector>

#include "lab/scenario.hpp"

namespace lab {

// Indices refer to positions in the input point list.
struct LambdaCap {
  double lambda_cap = 0;          // min over C_min of sum sqrt(quad)
  std::vector<int> c_min;         // minima of the declared values
  std::vector<int> c_minmin;      // subset attaining lambda_cap
  std::vector<double> sum_sqrt;   // per C_min entry
};

LambdaCap lambda_cap(const std::vector<CriticalPointData>& points);

// gamma_P = f_P^2 prod_k quad_k^(-1/4) / sum over the supplied set.
// Requires at least one modulating ratio equal to 1.
std::map<int, double> concentration_weights(
    const std::vector<CriticalPointData>& points,
    const std::vector<int>& c_minmin, const std::map<int, double>& f);

struct Pressure {
  double value = 0;
  std::vector<int> arg_set;             // points attaining the min
  std::vector<double> contributions;    // one per input point
};

// Pr = min_P [ c(P) - sum_i min(0, h_i) ] with h the field eigenvalues
// (Hessian of phi) declared on each point.
Pressure topological_pressure(const std::vector<CriticalPointData>& points);

// c_P = prod |h_i|^(-1/2) / sum over the supplied (maximally charged) set.
std::map<int, double> gradient_weights(
    const std::vector<CriticalPointData>& points, const std::vector<int>& set);

// Sorted sums sum_n (2 k_n + 1) sqrt(quad_n) over multi-indices with
// k_n <= k_max; the first entry is the ground value sum sqrt(quad).
std::vector<double> hermite_spectrum(const std::vector<double>& quad, int k_max);

// Literal evaluation of the second-order eigenvalue coefficient formula.
// The cross-derivative block A+B+C enters with a configurable sign (the
// two printed derivations disagree); both signs are always reported and
// neither is used as an assertion target.
struct ThetaTerms {
  double prefactor = 0;         // pi^(m/2) K f^2 / prod quad^(1/4)
  double prefactor_single_well = 0;  // the 2^(-m/2) reduction
  double curvature = 0;         // -R/4 - (1/12) sum R_ijij sqrt(qi/qj)
  double quartic = 0;           // (1/4) sum_{i<j} c_iijj/sqrt(qi qj) + (1/2) sum c_iiii/qi
  double abc = 0;               // A + B + C cross terms
  double theta_plus = 0;        // prefactor * (curvature + quartic + abc)
  double theta_minus = 0;       // prefactor * (curvature + quartic - abc)
};

// K convention: K = 1 / ( (2 pi)^(m/2) sum_R f_R^2 prod quad^(-1/4) ),
// under which the single-well prefactor reduces to 2^(-m/2).
double theta_norm_constant(const std::vector<CriticalPointData>& points,
                           const std::vector<int>& c_minmin,
                           const std::map<int, double>& f);

ThetaTerms theta_predictor(const CriticalPointData& p, double f_p, double K);

// Independent second-order perturbation oracle for the rescaled operator
// -d^2/dy^2 + quad y^2 + e^(1/4) c3 y^3 + e^(1/2) c4 y^4 (per axis,
// separable): quartic first order plus cubic second order over excited
// oscillator levels (exact by level 3; summed to `levels` as a check).
double theta_oracle_rs(const CriticalPointData& p, int levels = 40);

// Closed-form bounded solution of dz/dt = z_xx/2 - lam (x^2 + mu x) z,
// z(0, .) = 1.
double fk_kernel(double lam, double mu, double x, double t);

struct ChiLedger {
  double chi0 = 0;               // min declared value
  std::vector<int> c1;           // its arg set (C_min)
  double chi1 = 0;               // lambda_cap over c1
  std::vector<int> c2;           // C_minmin
  double chi2 = 0;               // min theta over c2 (sign switch: plus)
  std::vector<int> c3;           // arg set of chi2
  int removed_at = -1;           // first n with |C_{n+1}| = 1, -1 if never
  bool degenerate = false;       // |c3| > 1
};

ChiLedger chi_ledger(const std::vector<CriticalPointData>& points,
                     const std::map<int, double>& f, double K);

// (1/T) integral of c along a parametrized closed curve.
double cycle_average(const ScalarFn& c, const CycleSpec& cycle, int panels = 4096);

// Aggregate report for the CLI and the recipes.
struct PredictorReport {
  double min_c = 0;
  LambdaCap cap;
  std::map<int, double> gamma;          // potential case, f = 1 defaults
  Pressure pressure;                    // gradient case
  std::map<int, double> gradient_w;     // over pressure.arg_set
  std::vector<ThetaTerms> theta;        // per C_minmin point
  double theta_rs = 0;                  // at the first C_minmin point
  ChiLedger ledger;
  std::vector<double> cycle_averages;   // one per declared cycle
};

PredictorReport predictor_report(const ScenarioSpec& spec);

}  // namespace lab
