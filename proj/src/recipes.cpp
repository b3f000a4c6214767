#include "lab/recipes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lab/numerics.hpp"
#include "lab/rng.hpp"
#include "lab/scenario_library.hpp"

namespace lab {

namespace {

std::vector<double> geometric_ladder(double hi, double lo, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i)
    out.push_back(hi * std::pow(lo / hi, i / (n - 1.0)));
  return out;
}

nlohmann::json sweep_json(const SweepResult& sw) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : sw.points) {
    nlohmann::json r;
    r["eps"] = p.eps;
    r["ok"] = p.ok;
    if (p.ok) {
      r["lambda"] = p.pair.lambda;
      r["residual"] = p.pair.residual;
      r["iterations"] = p.pair.iterations;
      r["sup"] = p.sup_u;
      r["argmax"] = {p.argmax[0], p.argmax[1]};
    } else {
      r["message"] = p.message;
    }
    rows.push_back(r);
  }
  return rows;
}

nlohmann::json fit_json(const ExpansionFit& f) {
  nlohmann::json j;
  j["c0"] = f.c0;
  j["c1"] = f.c1;
  j["c2"] = f.c2;
  j["rms_residual"] = f.rms_residual;
  j["condition"] = f.condition;
  j["n_points"] = f.n_points;
  j["eps_min"] = f.eps_min;
  j["eps_max"] = f.eps_max;
  return j;
}

nlohmann::json theta_json(const ThetaTerms& t) {
  nlohmann::json j;
  j["prefactor"] = t.prefactor;
  j["prefactor_single_well"] = t.prefactor_single_well;
  j["curvature_block"] = t.curvature;
  j["quartic_block"] = t.quartic;
  j["cross_block_abc"] = t.abc;
  j["theta_plus"] = t.theta_plus;
  j["theta_minus"] = t.theta_minus;
  return j;
}

}  // namespace

PotentialStudy study_double_well(int resolution) {
  PotentialStudy st;
  st.spec = builtin_scenario("double-well-1d");
  // starting the ladder at 0.032 keeps every residual under 1e-10: above
  // that the rounding floor of the eps/h^2-scaled stencil takes over
  const std::vector<double> ladder = {0.032, 0.016, 0.008,
                                      0.004, 0.002, 0.001};
  SweepOptions opts;
  opts.resolution = resolution;
  opts.solve.tol = 1e-12;
  st.sweep = sweep(st.spec, ladder, opts);

  st.cap = lambda_cap(st.spec.critical_points);
  st.theta_rs = theta_oracle_rs(st.spec.critical_points[st.cap.c_minmin.front()]);
  st.min_c = st.spec.critical_points.front().value;

  st.monotone = true;
  double prev = 1e300;
  for (const auto& p : st.sweep.points) {
    if (!p.ok) continue;
    const double lam = p.pair.lambda;
    st.lower_violation = std::max(st.lower_violation, st.min_c - lam);
    const double upper = st.min_c + st.cap.lambda_cap * std::sqrt(p.eps) +
                         0.5 * std::abs(st.theta_rs) * p.eps + 1e-8;
    st.upper_violation = std::max(st.upper_violation, lam - upper);
    if (lam > prev + 1e-12) st.monotone = false;
    prev = lam;
  }

  std::vector<double> fe, fl;
  for (const auto& p : st.sweep.points)
    if (p.ok && p.eps <= 0.0161) {
      fe.push_back(p.eps);
      fl.push_back(p.pair.lambda);
    }
  st.fit = fit_expansion(fe, fl);
  st.sup = supnorm_growth(st.sweep, ScaleCase::potential, 1, 5);
  st.track = argmax_velocity(st.sweep, st.spec.critical_points,
                             ScaleCase::potential);
  st.decay = decay_off_wells(st.sweep, st.spec, 0.3);
  return st;
}

QuarticStudy study_quartic(int resolution) {
  QuarticStudy st;
  st.spec = builtin_scenario("quartic-well-1d");
  const std::vector<double> ladder = geometric_ladder(1e-2, 1e-3, 6);
  SweepOptions opts;
  opts.resolution = resolution;
  opts.solve.tol = 1e-12;
  st.sweep = sweep(st.spec, ladder, opts);
  st.fit = fit_expansion(st.sweep);

  const auto& p0 = st.spec.critical_points.front();
  st.theta_rs = theta_oracle_rs(p0);
  const double K =
      theta_norm_constant(st.spec.critical_points, {0}, {{0, 1.0}});
  st.truc = theta_predictor(p0, 1.0, K);

  const auto& last = st.sweep.points.back();
  if (last.ok)
    st.profile =
        extract_profile(last.pair, st.sweep.grid, p0.location, last.eps, 0.25,
                        6.0, {std::sqrt(p0.quad[0])}, 161);

  // exact-harmonic refinement ladder: the continuum profile is the
  // Gaussian at every eps, so the distance tracks pure grid error
  const ScenarioSpec harm = builtin_scenario("harmonic-1d");
  const std::vector<std::pair<double, int>> ladder_h = {
      {4e-3, 1025}, {2e-3, 2049}, {1e-3, 4097}};
  for (const auto& [eps, n] : ladder_h) {
    const Grid g = build_grid(harm, n, 0, eps);
    const OperatorMatrix op = assemble_operator(harm, g, eps);
    const EigenPair pair = principal_eigenpair(op, g, {1e-12, 20000});
    const BlowupProfile prof = extract_profile(
        pair, g, harm.critical_points.front().location, eps, 0.25, 6.0,
        {1.0}, 161);
    st.harmonic_eps.push_back(eps);
    st.harmonic_distance.push_back(prof.l2_distance);
  }
  st.harmonic_decreasing = true;
  for (std::size_t i = 1; i < st.harmonic_distance.size(); ++i)
    if (st.harmonic_distance[i] >= st.harmonic_distance[i - 1])
      st.harmonic_decreasing = false;
  return st;
}

WeightsStudy study_weights(int resolution) {
  WeightsStudy st;
  st.eps = 1e-3;

  {
    const ScenarioSpec spec = builtin_scenario("double-well-1d");
    const Grid g = build_grid(spec, resolution, 0, st.eps);
    const OperatorMatrix op = assemble_operator(spec, g, st.eps);
    const EigenPair pair = principal_eigenpair(op, g, {1e-12, 20000});
    st.delta = default_delta(spec);
    st.sym = concentration_masses(pair, spec, g, st.eps, st.delta,
                                  MeasureKind::plain_u2);
    st.sym_half_delta = concentration_masses(pair, spec, g, st.eps,
                                             0.5 * st.delta,
                                             MeasureKind::plain_u2);
    const LambdaCap cap = lambda_cap(spec.critical_points);
    std::map<int, double> f;
    for (std::size_t i = 0; i < st.sym.regions.size(); ++i)
      f[static_cast<int>(i)] = st.sym.regions[i].f;
    const auto gamma = concentration_weights(spec.critical_points,
                                             cap.c_minmin, f);
    for (const auto& [i, g2] : gamma)
      st.sym_gamma_dev =
          std::max(st.sym_gamma_dev, std::abs(st.sym.regions[i].mass - g2));
  }

  {
    const ScenarioSpec spec = builtin_scenario("asymmetric-well-1d");
    const Grid g = build_grid(spec, resolution, 0, st.eps);
    const OperatorMatrix op = assemble_operator(spec, g, st.eps);
    const EigenPair pair = principal_eigenpair(op, g, {1e-12, 20000});
    const double delta = default_delta(spec);
    st.asym = concentration_masses(pair, spec, g, st.eps, delta,
                                   MeasureKind::plain_u2);
    const LambdaCap cap = lambda_cap(spec.critical_points);
    st.asym_target = cap.c_minmin.front();
    std::map<int, double> f;
    for (std::size_t i = 0; i < st.asym.regions.size(); ++i)
      f[static_cast<int>(i)] = st.asym.regions[i].f;
    const auto gamma = concentration_weights(spec.critical_points,
                                             cap.c_minmin, f);
    for (const auto& [i, g2] : gamma)
      st.asym_gamma_dev =
          std::max(st.asym_gamma_dev, std::abs(st.asym.regions[i].mass - g2));
  }
  return st;
}

GradientStudy study_gradient(int resolution) {
  GradientStudy st;
  st.spec = builtin_scenario("gradient-well-1d");
  const std::vector<double> ladder = {0.032, 0.016, 0.008, 0.004, 0.002, 0.001};
  SweepOptions opts;
  opts.resolution = resolution;
  opts.solve.tol = 1e-12;
  st.sweep = sweep(st.spec, ladder, opts);  // gauge-transformed solves

  st.pressure = topological_pressure(st.spec.critical_points);
  for (const auto& p : st.sweep.points)
    if (p.ok) st.lambda_small = p.pair.lambda;

  const auto& last = st.sweep.points.back();
  const int argmin = st.pressure.arg_set.front();
  if (last.ok) {
    // v = e^{-phi/2eps} u from the gauge solve: plain v^2 mass equals the
    // e^{-phi/eps} u^2 weighted measure of the original problem
    st.masses = concentration_masses(last.pair, st.spec, st.sweep.grid,
                                     last.eps, default_delta(st.spec),
                                     MeasureKind::plain_u2);
    st.masses.kind = MeasureKind::weighted_phi;
    st.mass_at_argmin = st.masses.regions[argmin].mass;

    const auto& p = st.spec.critical_points[argmin];
    st.profile = extract_profile(
        last.pair, st.sweep.grid, p.location, last.eps, 0.5, 6.0,
        {0.5 * std::abs(p.hessian_phi[0])}, 161);
  }
  st.sup = supnorm_growth(st.sweep, ScaleCase::gradient, 1, 4);
  st.track = argmax_velocity(st.sweep, st.spec.critical_points,
                             ScaleCase::gradient);
  return st;
}

CycleStudy study_cycle(int n_r, int n_theta) {
  CycleStudy st;
  st.spec = builtin_scenario("annulus-cycle");

  // certify on the contracting orientation of the cycle (the reversal of
  // the scenario field; trajectories of -b descend toward r = 1)
  const VectorFn b = st.spec.field.b;
  const VectorFn contracting = [b](const Pt& x) {
    const Pt v = b(x);
    return pt(-v[0], -v[1]);
  };
  st.cert = local_lyapunov_cycle_planar(contracting, 1.0, 2.0, 0.45);
  st.min_psi_beta2 = st.cert.min_psi_sampled;
  try {
    local_lyapunov_cycle_planar(contracting, 1.0, 1.0, 0.45);
    st.beta1_rejected = false;
  } catch (const std::runtime_error&) {
    st.beta1_rejected = true;
  }

  const std::vector<double> ladder = {0.05, 0.02, 0.01};
  SweepOptions opts;
  opts.resolution = n_r;
  opts.resolution_y = n_theta;
  opts.solve.tol = 1e-11;
  SweepResult sw = sweep(st.spec, ladder, opts);
  for (const auto& p : sw.points) {
    if (!p.ok) throw std::runtime_error("cycle study: sweep failed: " + p.message);
    st.eps.push_back(p.eps);
    st.lambda.push_back(p.pair.lambda);
  }
  st.cycle_avg = cycle_average(st.spec.c, st.spec.cycles.front());

  const auto& last = sw.points.back();
  const ConcentrationReport rep = concentration_masses(
      last.pair, st.spec, sw.grid, last.eps, 0.1, MeasureKind::weighted_L);
  st.band_mass = rep.regions.back().mass;

  const OperatorMatrix op = assemble_operator(st.spec, sw.grid, 0.01);
  st.m_matrix = op.is_m_matrix();

  std::vector<Pt> samples;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j < 16; ++j)
      samples.push_back(pt(0.55 + 0.9 * i / 20.0, 2.0 * M_PI * j / 16.0));
  st.decomposition = decompose_field(st.spec.field.b, st.spec.field.lyapunov,
                                     st.spec.field.grad_lyapunov, samples, 2);
  return st;
}

KernelStudy study_kernel(std::uint64_t seed, long long n_paths, double dt) {
  KernelStudy st;
  const std::vector<double> xs = {-0.5, 0.0, 0.5};
  const std::vector<double> ts = {0.25, 0.5, 1.0};
  int block = 0;
  for (double lam : {0.5, 2.0}) {
    for (double mu : {0.0, 1.0}) {
      KernelCheck chk =
          verify_kernel(lam, mu, xs, ts, n_paths, dt, seed + 100000 * block);
      st.max_abs_z = std::max(st.max_abs_z, chk.max_abs_z);
      for (const auto& row : chk.rows)
        st.max_dt_shift_over_se =
            std::max(st.max_dt_shift_over_se, row.dt_shift_over_se);
      st.checks.push_back(std::move(chk));
      ++block;
    }
  }
  return st;
}

InfraStudy study_infrastructure() {
  InfraStudy st;

  // gauge equivalence on a mild gradient scenario
  {
    ScenarioSpec s;
    s.name = "gauge-check";
    s.domain = {DomainKind::interval, 1, {{{-2, 2}, {0, 1}}},
                {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
    s.c = [](const Pt& p) { return 2.0 + 0.5 * std::sin(p[0]); };
    s.field.kind = FieldKind::gradient_of_phi;
    s.field.phi = [](const Pt& p) { return p[0] * p[0]; };
    s.field.grad_phi = [](const Pt& p) { return pt(2.0 * p[0]); };
    s.field.laplacian_phi = [](const Pt&) { return 2.0; };

    const double eps = 0.05;
    const Grid g = build_grid(s, 8193);
    const OperatorMatrix direct =
        assemble_operator(s, g, eps, AssemblyMode::central);
    const EigenPair direct_pair = principal_eigenpair(direct, g, {1e-12, 20000});

    const GaugeTransformed gt = gauge_transform(s, eps);
    const OperatorMatrix trans = assemble_operator(gt.transformed, g,
                                                   gt.solve_eps,
                                                   AssemblyMode::central);
    EigenPair trans_pair = principal_eigenpair(trans, g, {1e-13, 20000});
    const double lam_gauge = trans_pair.lambda * gt.eigenvalue_scale;
    st.gauge_rel_gap =
        std::abs(direct_pair.lambda - lam_gauge) / std::abs(direct_pair.lambda);
  }

  // synthetic basis recovery
  {
    const std::vector<double> eps = {0.1, 0.05, 0.02, 0.01, 0.005};
    std::vector<double> lam;
    for (double e : eps) lam.push_back(1.0 + 2.0 * std::sqrt(e) + 3.0 * e);
    const ExpansionFit f = fit_expansion(eps, lam);
    st.fit_recovery_err = std::max({std::abs(f.c0 - 1.0), std::abs(f.c1 - 2.0),
                                    std::abs(f.c2 - 3.0)});
  }

  // M-matrix structure and Perron positivity across the shipped catalog
  st.m_matrix_all = true;
  st.min_eigvec_min = 1e300;
  for (const std::string& name : builtin_scenario_names()) {
    const ScenarioSpec spec = builtin_scenario(name);
    int nx = spec.domain.dim == 1 ? 257 : 65;
    int ny = spec.domain.kind == DomainKind::annulus_polar ? 32 : 0;
    const Grid g = build_grid(spec, nx, ny);
    const OperatorMatrix op = assemble_operator(spec, g, 1e-2);
    if (!op.is_m_matrix()) st.m_matrix_all = false;
    const EigenPair pair = principal_eigenpair(op, g, {1e-10, 40000});
    double umin = 1e300;
    for (double v : pair.u) umin = std::min(umin, v);
    st.min_eigvec_min = std::min(st.min_eigvec_min, umin);
  }
  return st;
}

LyapunovSuite study_lyapunov_suite(std::uint64_t seed, int n_cases) {
  LyapunovSuite st;
  SplitMix64 rng(seed);
  auto uniform = [&rng](double a, double b) {
    return a + (b - a) * rng.next_double();
  };
  GaussianRng gauss(seed, 77);

  for (int c = 0; c < n_cases; ++c) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);  // 2..6
    const double mu = uniform(0.1, 4.0);
    Eigen::MatrixXcd D(n, n);
    const bool complex_case = c % 4 == 3;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        D(i, j) = std::complex<double>(
            gauss.normal(), complex_case ? gauss.normal() : 0.0);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(D);
    double max_re = -1e300;
    for (int i = 0; i < n; ++i)
      max_re = std::max(max_re, es.eigenvalues()(i).real());
    D -= (max_re + uniform(0.1, 2.0)) *
         Eigen::MatrixXcd::Identity(n, n);

    const LyapunovMatrix sol = solve_lyapunov(D, mu);
    const double a2 = sol.A.squaredNorm();
    st.worst_residual_ratio =
        std::max(st.worst_residual_ratio, sol.residual / a2);
    st.min_eig_A = c == 0 ? sol.min_eig_A : std::min(st.min_eig_A, sol.min_eig_A);
    ++st.n_cases;
  }

  const ScenarioSpec annulus = builtin_scenario("annulus-cycle");
  const VectorFn contracting = [&annulus](const Pt& x) {
    const Pt v = annulus.field.b(x);
    return pt(-v[0], -v[1]);
  };
  try {
    const LocalLyapunov cert =
        local_lyapunov_cycle_planar(contracting, 1.0, 2.0, 0.45);
    st.cycle_beta2_ok = cert.min_psi_sampled > 0;
  } catch (const std::runtime_error&) {
    st.cycle_beta2_ok = false;
  }
  try {
    local_lyapunov_cycle_planar(contracting, 1.0, 1.0, 0.45);
    st.cycle_beta1_rejected = false;
  } catch (const std::runtime_error&) {
    st.cycle_beta1_rejected = true;
  }

  // descent margins on the shipped constructions
  {
    const VectorFn b1 = [](const Pt& x) { return pt(-x[0]); };
    const LocalLyapunov loc = local_lyapunov_point(b1, pt(0), 1.0, 1);
    const DescentReport rep = descent_check(
        loc.L, b1, {pt(1.0), pt(0.5), pt(0.0)}, 10.0, 1e-10, 1,
        std::make_pair(pt(0), 3.0));
    st.descent_worst_increment =
        std::max(st.descent_worst_increment, rep.max_increment);

    // quadratic scaling of the descent rate with distance
    std::vector<double> lr, lrate;
    for (double r : {0.05, 0.1, 0.2, 0.4}) {
      lr.push_back(std::log(r));
      lrate.push_back(std::log(descent_rate(loc, b1, pt(r), 1)));
    }
    st.descent_exponent = fit_slope(lr, lrate);
  }
  {
    // contracting annulus flow in polar coordinates:
    // dr/dt = -b_r, dtheta/dt = -b_theta / r
    const VectorFn flow = [&contracting](const Pt& x) {
      const Pt v = contracting(x);
      return pt(v[0], v[1] / x[0]);
    };
    const DescentReport rep = descent_check(
        annulus.field.lyapunov, flow, {pt(1.3, 0.0), pt(0.8, 1.0)}, 20.0,
        1e-10, 2);
    st.descent_worst_increment =
        std::max(st.descent_worst_increment, rep.max_increment);
  }
  {
    const ScenarioSpec grad = builtin_scenario("gradient-well-1d");
    const VectorFn b = [&grad](const Pt& x) { return grad.field.grad_phi(x); };
    const LocalLyapunov loc = local_lyapunov_point(b, pt(0), 1.0, 1, 0.4);
    const DescentReport rep = descent_check(loc.L, b, {pt(0.3), pt(-0.25)},
                                            10.0, 1e-10, 1,
                                            std::make_pair(pt(0), 1.0));
    st.descent_worst_increment =
        std::max(st.descent_worst_increment, rep.max_increment);
  }
  return st;
}

std::vector<std::string> recipe_tags() {
  return {"potential-theorem", "thnf-profile", "th4-weights",
          "thhk-expansion",    "tp-gradient",  "thfdtpr-cycle",
          "noyau",             "appendix2-decay"};
}

RunReport run_recipe(const std::string& tag, std::uint64_t seed) {
  RunReport rep;
  rep.command = "reproduce";
  rep.scenario = tag;

  if (tag == "potential-theorem") {
    const PotentialStudy st = study_double_well();
    rep.scenario = st.spec.name;
    rep.add_le("lambda-lower-bound-violation", st.lower_violation, 1e-9, tag);
    rep.add_le("lambda-upper-bound-violation", st.upper_violation, 1e-9, tag);
    rep.add_abs("expansion-c0-vs-min-c", st.fit.c0, st.min_c, 1e-4, tag);
    rep.add_rel("expansion-c1-vs-lambda-cap", st.fit.c1, st.cap.lambda_cap,
                0.05, tag);
    rep.add_flag("lambda-monotone-in-eps", st.monotone, tag);
    rep.add_abs("supnorm-slope-potential", st.sup.slope, st.sup.expected, 0.05,
                tag);
    rep.add_flag("argmax-squared-over-sqrt-eps-bounded", st.track.bound_ok, tag);
    rep.payload["sweep"] = sweep_json(st.sweep);
    rep.payload["fit"] = fit_json(st.fit);
    rep.payload["theta_rs"] = st.theta_rs;
    rep.payload["lambda_cap"] = st.cap.lambda_cap;
  } else if (tag == "thnf-profile") {
    const QuarticStudy st = study_quartic();
    rep.scenario = st.spec.name;
    rep.add_le("profile-l2-distance", st.profile.l2_distance, 0.05, tag);
    rep.add_flag("profile-in-unit-band",
                 st.profile.w_min > 0 && st.profile.w_max <= 1.0 + 1e-12, tag);
    rep.add_flag("harmonic-refinement-decreasing", st.harmonic_decreasing, tag);
    rep.payload["profile_distance"] = st.profile.l2_distance;
    rep.payload["fitted_quad"] = st.profile.fitted_quad;
    rep.payload["harmonic_eps"] = st.harmonic_eps;
    rep.payload["harmonic_distance"] = st.harmonic_distance;
  } else if (tag == "th4-weights") {
    const WeightsStudy st = study_weights();
    rep.scenario = "double-well-1d / asymmetric-well-1d";
    rep.add_abs("sym-mass-left", st.sym.regions[0].mass, 0.5, 0.03, tag);
    rep.add_abs("sym-mass-right", st.sym.regions[1].mass, 0.5, 0.03, tag);
    rep.add_le("sym-gamma-vs-predicted", st.sym_gamma_dev, 0.05, tag);
    rep.add_ge("asym-selected-mass",
               st.asym.regions[st.asym_target].mass, 0.95, tag);
    rep.add_le("asym-gamma-vs-predicted", st.asym_gamma_dev, 0.05, tag);
    double drob = 0;
    for (std::size_t i = 0; i < st.sym.regions.size(); ++i)
      drob = std::max(drob, std::abs(st.sym.regions[i].mass -
                                     st.sym_half_delta.regions[i].mass));
    rep.add_le("delta-robustness", drob, 0.02, tag);
    rep.payload["delta"] = st.delta;
    rep.payload["sym_masses"] = {st.sym.regions[0].mass, st.sym.regions[1].mass};
    rep.payload["asym_masses"] = {st.asym.regions[0].mass,
                                  st.asym.regions[1].mass};
    rep.payload["sym_remainder"] = st.sym.remainder;
  } else if (tag == "thhk-expansion") {
    const QuarticStudy st = study_quartic();
    rep.scenario = st.spec.name;
    rep.add_rel("expansion-c2-vs-rs-oracle", st.fit.c2, st.theta_rs, 0.10, tag);
    rep.payload["fit"] = fit_json(st.fit);
    rep.payload["theta_rs"] = st.theta_rs;
    rep.payload["second_order_formula"] = theta_json(st.truc);  // informational
  } else if (tag == "tp-gradient") {
    const GradientStudy st = study_gradient();
    rep.scenario = st.spec.name;
    rep.add_rel("lambda-vs-pressure", st.lambda_small, st.pressure.value, 0.05,
                tag);
    rep.add_ge("weighted-mass-at-pressure-set", st.mass_at_argmin, 0.9, tag);
    rep.add_le("gradient-profile-distance", st.profile.l2_distance, 0.05, tag);
    rep.add_abs("supnorm-slope-gradient", st.sup.slope, st.sup.expected, 0.05,
                tag);
    rep.add_flag("argmax-over-sqrt-eps-decreasing",
                 st.track.d_over_sqrt_decreasing, tag);
    rep.payload["pressure"] = st.pressure.value;
    rep.payload["contributions"] = st.pressure.contributions;
    rep.payload["sweep"] = sweep_json(st.sweep);
  } else if (tag == "thfdtpr-cycle") {
    const CycleStudy st = study_cycle();
    rep.scenario = st.spec.name;
    rep.add_flag("cycle-psi-certificate-beta2", st.min_psi_beta2 > 0, tag);
    rep.add_flag("cycle-psi-beta1-rejected", st.beta1_rejected, tag);
    rep.add_ge("weighted-L-band-mass", st.band_mass, 0.95, tag);
    rep.add_rel("lambda-vs-cycle-average", st.lambda.back(), st.cycle_avg,
                0.10, tag);
    rep.add_flag("upwind-m-matrix", st.m_matrix, tag);
    rep.payload["eps"] = st.eps;
    rep.payload["lambda"] = st.lambda;
    rep.payload["cycle_average"] = st.cycle_avg;
    rep.payload["min_psi_beta2"] = st.min_psi_beta2;
    rep.payload["decomposition_min_psi_omega"] = st.decomposition.min_psi_omega;
    rep.payload["decomposition_sign_counts"] = {st.decomposition.n_pos,
                                                st.decomposition.n_neg,
                                                st.decomposition.n_zero};
  } else if (tag == "noyau") {
    const KernelStudy st = study_kernel(seed);
    rep.scenario = "fk-kernel";
    rep.add_le("max-abs-z", st.max_abs_z, 3.0, tag);
    rep.add_le("dt-halving-shift-over-se", st.max_dt_shift_over_se, 1.0, tag);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& chk : st.checks)
      for (const auto& r : chk.rows)
        rows.push_back({{"lambda", chk.lambda},
                        {"mu", chk.mu},
                        {"x", r.x},
                        {"t", r.t},
                        {"closed_form", r.closed_form},
                        {"mc_mean", r.mc_mean},
                        {"mc_se", r.mc_se},
                        {"z", r.z},
                        {"dt_shift_over_se", r.dt_shift_over_se}});
    rep.payload["table"] = rows;
  } else if (tag == "appendix2-decay") {
    const PotentialStudy st = study_double_well();
    rep.scenario = st.spec.name;
    rep.add_le("off-well-ratio-at-1e-3", st.decay.ratio.back(), 1e-6, tag);
    rep.add_flag("decay-exponent-increasing", st.decay.exponent_increasing, tag);
    rep.payload["eps"] = st.decay.eps;
    rep.payload["ratio"] = st.decay.ratio;
    rep.payload["exponent"] = st.decay.exponent;
    rep.payload["margin"] = st.decay.margin;
  } else {
    std::string catalog;
    for (const auto& t : recipe_tags()) catalog += "\n  " + t;
    throw std::invalid_argument("unknown reproduce tag '" + tag +
                                "'; available:" + catalog);
  }
  return rep;
}

}  // namespace lab
