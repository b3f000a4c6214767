// Acceptance suite: runs every shipped criterion at its stated tolerance
// and prints one pass/fail line each. Usage: acceptance [path-to-lab-cli]
// (the CLI path enables the bit-identical rerun check).

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lab/recipes.hpp"
#include "lab/scenario_library.hpp"

using namespace lab;

namespace {

int g_fail = 0;

void line(int id, const std::string& what, bool pass, const std::string& info) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": "
            << what << " (" << info << ")\n";
  if (!pass) ++g_fail;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string lab_bin = argc > 1 ? argv[1] : "";
  using clock = std::chrono::steady_clock;

  // ---- double-well study: criteria 1, 6, 7 (potential part), 8
  const auto t0 = clock::now();
  const PotentialStudy dw = study_double_well();
  const double dw_seconds =
      std::chrono::duration<double>(clock::now() - t0).count();

  line(1, "eigenvalue bracket and sqrt-eps expansion on double-well-1d",
       dw.lower_violation <= 1e-9 && dw.upper_violation <= 1e-9 &&
           std::abs(dw.fit.c0 - dw.min_c) <= 1e-4 &&
           std::abs(dw.fit.c1 - dw.cap.lambda_cap) <=
               0.05 * dw.cap.lambda_cap &&
           dw.monotone && dw_seconds <= 120.0,
       "lower_viol=" + fmt(dw.lower_violation) +
           " upper_viol=" + fmt(dw.upper_violation) + " c0=" + fmt(dw.fit.c0) +
           " c1=" + fmt(dw.fit.c1) + " cap=" + fmt(dw.cap.lambda_cap) +
           " runtime_s=" + fmt(dw_seconds));

  // ---- quartic study: criteria 2 and 4
  const QuarticStudy qw = study_quartic();
  line(2, "blow-up profile matches the Gaussian ground state",
       qw.profile.l2_distance <= 0.05 && qw.harmonic_decreasing &&
           qw.profile.w_min > 0 && qw.profile.w_max <= 1.0 + 1e-12,
       "distance=" + fmt(qw.profile.l2_distance) + " harmonic=[" +
           fmt(qw.harmonic_distance[0]) + "," + fmt(qw.harmonic_distance[1]) +
           "," + fmt(qw.harmonic_distance[2]) + "]");

  // ---- weights study: criterion 3
  const WeightsStudy ws = study_weights();
  line(3, "limit-measure weights on symmetric and asymmetric wells",
       std::abs(ws.sym.regions[0].mass - 0.5) <= 0.03 &&
           std::abs(ws.sym.regions[1].mass - 0.5) <= 0.03 &&
           ws.asym.regions[ws.asym_target].mass >= 0.95 &&
           ws.sym_gamma_dev <= 0.05 && ws.asym_gamma_dev <= 0.05,
       "sym=(" + fmt(ws.sym.regions[0].mass) + "," +
           fmt(ws.sym.regions[1].mass) + ") asym_sel=" +
           fmt(ws.asym.regions[ws.asym_target].mass) +
           " gamma_dev=" + fmt(std::max(ws.sym_gamma_dev, ws.asym_gamma_dev)));

  line(4, "fitted eps coefficient against the perturbation oracle",
       std::abs(qw.fit.c2 - qw.theta_rs) <= 0.10 * std::abs(qw.theta_rs),
       "c2=" + fmt(qw.fit.c2) + " oracle=" + fmt(qw.theta_rs) +
           " formula_plus=" + fmt(qw.truc.theta_plus) +
           " formula_minus=" + fmt(qw.truc.theta_minus) + " (informational)");

  // ---- gradient study: criteria 5 and 7 (gradient part)
  const GradientStudy gs = study_gradient();
  line(5, "gradient drift: pressure limit, weighted mass, profile, sup slope",
       std::abs(gs.lambda_small - gs.pressure.value) <=
               0.05 * gs.pressure.value &&
           gs.mass_at_argmin >= 0.9 && gs.profile.l2_distance <= 0.05 &&
           std::abs(gs.sup.slope - gs.sup.expected) <= 0.05,
       "lambda=" + fmt(gs.lambda_small) + " pressure=" +
           fmt(gs.pressure.value) + " mass=" + fmt(gs.mass_at_argmin) +
           " profile=" + fmt(gs.profile.l2_distance) +
           " slope=" + fmt(gs.sup.slope));

  line(6, "sup-norm growth exponent in the potential case",
       std::abs(dw.sup.slope - dw.sup.expected) <= 0.05,
       "slope=" + fmt(dw.sup.slope) + " expected=" + fmt(dw.sup.expected));

  line(7, "argmax velocity bounds",
       dw.track.bound_ok && gs.track.d_over_sqrt_decreasing,
       "potential_bounded=" + std::string(dw.track.bound_ok ? "yes" : "no") +
           " gradient_decreasing=" +
           std::string(gs.track.d_over_sqrt_decreasing ? "yes" : "no"));

  line(8, "decay off the wells",
       dw.decay.ratio.back() <= 1e-6 && dw.decay.exponent_increasing,
       "ratio=" + fmt(dw.decay.ratio.back()) + " exponent_increasing=" +
           std::string(dw.decay.exponent_increasing ? "yes" : "no"));

  // ---- kernel study: criterion 9
  const auto t9 = clock::now();
  const KernelStudy ks = study_kernel(1);
  const double ks_seconds =
      std::chrono::duration<double>(clock::now() - t9).count();
  line(9, "Monte-Carlo kernel verification",
       ks.max_abs_z <= 3.0 && ks.max_dt_shift_over_se < 1.0 &&
           ks_seconds <= 180.0,
       "max|z|=" + fmt(ks.max_abs_z) +
           " dt_shift/se=" + fmt(ks.max_dt_shift_over_se) +
           " runtime_s=" + fmt(ks_seconds));

  // ---- cycle study: criterion 10
  const CycleStudy cs = study_cycle();
  line(10, "limit-cycle concentration on the annulus",
       cs.min_psi_beta2 > 0 && cs.band_mass > 0.95 &&
           std::abs(cs.lambda.back() - cs.cycle_avg) <= 0.10 * cs.cycle_avg,
       "band_mass=" + fmt(cs.band_mass) + " lambda=" + fmt(cs.lambda.back()) +
           " cycle_avg=" + fmt(cs.cycle_avg));

  // ---- matrix equation suite: criterion 11
  const LyapunovSuite ls = study_lyapunov_suite(2024, 100);
  line(11, "matrix equation and certificate property suite",
       ls.worst_residual_ratio <= 1e-10 && ls.min_eig_A > 0 &&
           ls.cycle_beta2_ok && ls.cycle_beta1_rejected &&
           ls.descent_worst_increment <= 1e-9 &&
           std::abs(ls.descent_exponent - 2.0) <= 0.1,
       "residual_ratio=" + fmt(ls.worst_residual_ratio) +
           " min_eig=" + fmt(ls.min_eig_A) +
           " descent_inc=" + fmt(ls.descent_worst_increment) +
           " rate_exponent=" + fmt(ls.descent_exponent));

  // ---- infrastructure: criterion 12
  const InfraStudy inf = study_infrastructure();
  bool rerun_identical = true;
  std::string rerun_info = "cli-skipped";
  if (!lab_bin.empty()) {
    namespace fs = std::filesystem;
    const fs::path tmp = fs::path("acceptance_tmp");
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    const std::string cfg_path = (tmp / "fk.cfg").string();
    std::ofstream(cfg_path) << "[fk]\nlambda = 0.5\nmu = 0\nx = 0\nt = 0.25\n";
    for (int run = 0; run < 2; ++run) {
      const std::string out = (tmp / ("run" + std::to_string(run))).string();
      const std::string cmd_a = lab_bin + " predict --scenario double-well-1d"
                                " --out " + out + " > " + out + "_log.txt 2>&1";
      const std::string cmd_b = lab_bin + " fk-verify --config " + cfg_path +
                                " --n-paths 2000 --dt 0.002 --seed 3 --out " +
                                out + " >> " + out + "_log.txt 2>&1";
      if (std::system(cmd_a.c_str()) != 0) rerun_identical = false;
      if (std::system(cmd_b.c_str()) != 0) rerun_identical = false;
    }
    for (const char* f : {"report.json", "predictors.csv", "fk_table.csv"}) {
      const std::string a = slurp((tmp / "run0" / f).string());
      const std::string b = slurp((tmp / "run1" / f).string());
      if (a.empty() || a != b) rerun_identical = false;
    }
    rerun_info = rerun_identical ? "bit-identical" : "outputs differ";
  }
  line(12, "infrastructure: gauge spectra, fit recovery, reruns, M-matrices",
       inf.gauge_rel_gap <= 1e-6 && inf.fit_recovery_err <= 1e-10 &&
           inf.m_matrix_all && inf.min_eigvec_min > 0 && rerun_identical,
       "gauge_gap=" + fmt(inf.gauge_rel_gap) +
           " fit_err=" + fmt(inf.fit_recovery_err) + " m_matrix=" +
           std::string(inf.m_matrix_all ? "yes" : "no") + " " + rerun_info);

  std::cout << (g_fail == 0 ? "all criteria passed\n"
                            : std::to_string(g_fail) + " criteria failed\n");
  return g_fail == 0 ? 0 : 1;
}
