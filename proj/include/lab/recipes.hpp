#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lab/asymptotics.hpp"
#include "lab/blowup.hpp"
#include "lab/lyapunov.hpp"
#include "lab/report.hpp"
#include "lab/stochastic.hpp"

namespace lab {

// Reusable study runs behind the reproduce tags; the acceptance suite
// shares them so the expensive sweeps run once.

struct PotentialStudy {
  ScenarioSpec spec;
  SweepResult sweep;
  ExpansionFit fit;          // over the small-eps fitting window
  SupnormFit sup;            // tail of the sweep
  ArgmaxTrack track;
  DecayReport decay;         // margin 0.3
  LambdaCap cap;
  double theta_rs = 0;       // at a C_minmin point
  double min_c = 0;
  double lower_violation = 0;  // max over sweep of (min_c - lambda)
  double upper_violation = 0;  // max over sweep of (lambda - upper bound)
  bool monotone = false;       // lambda nonincreasing as eps decreases
};
PotentialStudy study_double_well(int resolution = 4097);

struct QuarticStudy {
  ScenarioSpec spec;
  SweepResult sweep;
  ExpansionFit fit;
  double theta_rs = 0;
  ThetaTerms truc;               // informational, both signs
  BlowupProfile profile;         // at the smallest sweep eps
  std::vector<double> harmonic_eps;
  std::vector<double> harmonic_distance;  // refinement ladder, harmonic-1d
  bool harmonic_decreasing = false;
};
QuarticStudy study_quartic(int resolution = 4097);

struct WeightsStudy {
  double eps = 1e-3;
  double delta = 0;
  ConcentrationReport sym;            // symmetric double well, plain u^2
  ConcentrationReport sym_half_delta;
  double sym_gamma_dev = 0;           // max |measured - predicted(f measured)|
  ConcentrationReport asym;           // asymmetric wells
  int asym_target = 0;                // region index of the selected well
  double asym_gamma_dev = 0;
};
WeightsStudy study_weights(int resolution = 4097);

struct GradientStudy {
  ScenarioSpec spec;
  SweepResult sweep;                  // gauge-transformed solves (v = e^{-phi/2eps} u)
  Pressure pressure;
  double lambda_small = 0;            // at the smallest eps
  ConcentrationReport masses;         // weighted-phi measure = plain v^2
  double mass_at_argmin = 0;
  BlowupProfile profile;              // scale sqrt(eps) at the pressure point
  SupnormFit sup;
  ArgmaxTrack track;
};
GradientStudy study_gradient(int resolution = 4097);

struct CycleStudy {
  ScenarioSpec spec;
  LocalLyapunov cert;                // beta = 2 certificate
  bool beta1_rejected = false;
  double min_psi_beta2 = 0;
  std::vector<double> eps;
  std::vector<double> lambda;
  double cycle_avg = 0;
  double band_mass = 0;              // e^{-L/eps} u^2 mass in |r-1| < 0.1
  bool m_matrix = false;
  FieldDecomposition decomposition;  // Omega = b - grad L diagnostics
};
// n_r = 256 puts the 0.1-band edges mid-cell, so the discrete band mass
// approximates the open band without an edge-node bias.
CycleStudy study_cycle(int n_r = 256, int n_theta = 64);

struct KernelStudy {
  std::vector<KernelCheck> checks;   // lambda x mu grid
  double max_abs_z = 0;
  double max_dt_shift_over_se = 0;
};
KernelStudy study_kernel(std::uint64_t seed, long long n_paths = 100000,
                         double dt = 1e-3);

struct InfraStudy {
  double gauge_rel_gap = 0;          // direct vs gauge-transformed spectra
  double fit_recovery_err = 0;       // synthetic {1, sqrt(e), e} recovery
  bool m_matrix_all = false;         // shipped upwind assemblies
  double min_eigvec_min = 0;         // positivity across shipped solves
};
InfraStudy study_infrastructure();

struct LyapunovSuite {
  int n_cases = 0;
  double worst_residual_ratio = 0;   // residual / ||A||^2
  double min_eig_A = 0;
  bool cycle_beta2_ok = false;
  bool cycle_beta1_rejected = false;
  double descent_worst_increment = 0;
  double descent_exponent = 0;       // rate-vs-distance fit, expect 2
};
LyapunovSuite study_lyapunov_suite(std::uint64_t seed, int n_cases = 100);

// Reproduce tags (External Interfaces): potential-theorem, thnf-profile,
// th4-weights, thhk-expansion, tp-gradient, thfdtpr-cycle, noyau,
// appendix2-decay.
std::vector<std::string> recipe_tags();
RunReport run_recipe(const std::string& tag, std::uint64_t seed);

}  // namespace lab
