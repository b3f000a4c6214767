// Experiment harness: scenarios, sweeps, predictors, blow-up analysis,
// Monte-Carlo kernel verification and Lyapunov certificates, with
// reproducible file outputs. Exit codes: 0 = all verdicts pass,
// 2 = verdict failures, 1 = execution error.

#include <CLI11.hpp>
#include <iostream>

#include "lab/asymptotics.hpp"
#include "lab/blowup.hpp"
#include "lab/eigensolver.hpp"
#include "lab/lyapunov.hpp"
#include "lab/recipes.hpp"
#include "lab/report.hpp"
#include "lab/runconfig.hpp"
#include "lab/scenario_library.hpp"
#include "lab/stochastic.hpp"

namespace {

using namespace lab;

MeasureKind pick_measure(const ScenarioSpec& spec, const std::string& requested,
                         bool gauge_used) {
  if (requested == "plain-u2") return MeasureKind::plain_u2;
  if (requested == "weighted-phi") return MeasureKind::weighted_phi;
  if (requested == "weighted-L") return MeasureKind::weighted_L;
  if (spec.field.kind == FieldKind::general) return MeasureKind::weighted_L;
  if (spec.field.kind == FieldKind::gradient_of_phi)
    return gauge_used ? MeasureKind::plain_u2 : MeasureKind::weighted_phi;
  return MeasureKind::plain_u2;
}

void write_eigenpair_csv(const std::string& path, const Grid& g,
                         const EigenPair& pair) {
  std::vector<std::vector<double>> rows;
  for (int f = 0; f < g.n_free; ++f) {
    const Pt p = g.point_of_free(f);
    if (g.dim == 1)
      rows.push_back({p[0], pair.u[f]});
    else
      rows.push_back({p[0], p[1], pair.u[f]});
  }
  write_csv(path, g.dim == 1 ? "x,u" : "x0,x1,u", rows);
}

void write_sweep_outputs(const std::string& dir, const SweepResult& sw) {
  std::vector<std::vector<double>> rows;
  std::vector<double> es, ls, sups;
  for (const auto& p : sw.points) {
    if (!p.ok) continue;
    rows.push_back({p.eps, p.pair.lambda, p.pair.residual,
                    static_cast<double>(p.pair.iterations)});
    es.push_back(p.eps);
    ls.push_back(p.pair.lambda);
    sups.push_back(p.sup_u);
  }
  write_csv(dir + "/sweep_summary.csv", "eps,lambda,residual,iterations", rows);
  write_series(dir + "/lambda.dat", es, ls);
  write_series(dir + "/supnorm.dat", es, sups);
}

int finish(const RunReport& rep, const std::string& out_dir) {
  ensure_dir(out_dir);
  write_json(rep.to_json(), out_dir + "/report.json");
  for (const auto& v : rep.verdicts) std::cout << v.line() << "\n";
  if (rep.verdicts.empty()) return 0;
  return rep.all_pass() ? 0 : 2;
}

int cmd_solve(const RunConfig& cfg) {
  const ScenarioSpec spec = resolve_scenario(cfg);
  const ValidationReport val = validate_scenario(spec);
  if (!val.ok()) {
    std::cerr << "scenario rejected:\n" << val.summary();
    return 1;
  }
  const double eps = cfg.eps_list.empty() ? 0.01 : cfg.eps_list.front();
  SweepOptions opts;
  opts.resolution = cfg.resolution;
  opts.resolution_y = cfg.resolution_y;
  opts.solve.tol = cfg.tol;
  opts.solve.max_iter = cfg.max_iter;
  opts.mode = cfg.upwind ? AssemblyMode::upwind : AssemblyMode::central;
  const SweepResult sw = sweep(spec, {eps}, opts);
  if (!sw.points.front().ok) {
    std::cerr << "solve failed: " << sw.points.front().message << "\n";
    return 1;
  }
  const auto& p = sw.points.front();

  RunReport rep;
  rep.command = "solve";
  rep.scenario = spec.name;
  rep.payload["eps"] = eps;
  rep.payload["lambda"] = p.pair.lambda;
  rep.payload["residual"] = p.pair.residual;
  rep.payload["iterations"] = p.pair.iterations;
  rep.payload["sup_u"] = p.sup_u;
  rep.payload["gauge_used"] = sw.gauge_used;
  rep.payload["grid_warnings"] = sw.grid.warnings;
  rep.payload["validation"] = val.summary();

  ensure_dir(cfg.out_dir);
  write_eigenpair_csv(cfg.out_dir + "/eigenpair.csv", sw.grid, p.pair);
  if (cfg.dump_matrix) {
    const OperatorMatrix op = assemble_operator(
        spec, sw.grid, eps,
        cfg.upwind ? AssemblyMode::upwind : AssemblyMode::central);
    dump_matrix(op, cfg.out_dir + "/matrix.txt");
  }
  return finish(rep, cfg.out_dir);
}

int cmd_sweep(const RunConfig& cfg) {
  const ScenarioSpec spec = resolve_scenario(cfg);
  RunConfig c = cfg;
  if (c.eps_list.empty()) c.eps_list = {0.032, 0.016, 0.008, 0.004, 0.002, 0.001};
  c.require_eps_decreasing();

  SweepOptions opts;
  opts.resolution = c.resolution;
  opts.resolution_y = c.resolution_y;
  opts.solve.tol = c.tol;
  opts.solve.max_iter = c.max_iter;
  const SweepResult sw = sweep(spec, c.eps_list, opts);

  RunReport rep;
  rep.command = "sweep";
  rep.scenario = spec.name;
  rep.payload["gauge_used"] = sw.gauge_used;

  const ExpansionFit fit = fit_expansion(sw);  // throws below 4 points
  rep.payload["fit"] = {{"c0", fit.c0},
                        {"c1", fit.c1},
                        {"c2", fit.c2},
                        {"rms_residual", fit.rms_residual},
                        {"condition", fit.condition}};
  if (fit.ill_conditioned)
    std::cerr << "warning: expansion fit condition number " << fit.condition
              << "\n";

  const ScaleCase scase = spec.field.kind == FieldKind::zero
                              ? ScaleCase::potential
                              : ScaleCase::gradient;
  ensure_dir(c.out_dir);
  if (!spec.critical_points.empty()) {
    const SupnormFit sup = supnorm_growth(sw, scase, spec.domain.dim);
    const ArgmaxTrack track = argmax_velocity(sw, spec.critical_points, scase);
    const DecayReport decay = decay_off_wells(sw, spec, 0.3);
    rep.payload["supnorm_slope"] = sup.slope;
    rep.payload["supnorm_expected"] = sup.expected;
    rep.payload["argmax_exponent"] = track.fitted_exponent;
    rep.payload["argmax_split"] = track.split;
    rep.payload["decay_exponent"] = decay.exponent;
    write_series(c.out_dir + "/argmax.dat", track.eps, track.d);
    write_series(c.out_dir + "/decay.dat", decay.eps, decay.ratio);
  }
  write_sweep_outputs(c.out_dir, sw);
  return finish(rep, c.out_dir);
}

int cmd_predict(const RunConfig& cfg) {
  const ScenarioSpec spec = resolve_scenario(cfg);
  const PredictorReport pr = predictor_report(spec);

  RunReport rep;
  rep.command = "predict";
  rep.scenario = spec.name;
  rep.payload["min_c"] = pr.min_c;
  rep.payload["lambda_cap"] = pr.cap.lambda_cap;
  rep.payload["c_min"] = pr.cap.c_min;
  rep.payload["c_minmin"] = pr.cap.c_minmin;
  {
    nlohmann::json g = nlohmann::json::object();
    for (const auto& [i, v] : pr.gamma) g[std::to_string(i)] = v;
    rep.payload["gamma"] = g;
  }
  if (!pr.pressure.contributions.empty()) {
    rep.payload["pressure"] = pr.pressure.value;
    rep.payload["pressure_arg_set"] = pr.pressure.arg_set;
    rep.payload["pressure_contributions"] = pr.pressure.contributions;
    nlohmann::json g = nlohmann::json::object();
    for (const auto& [i, v] : pr.gradient_w) g[std::to_string(i)] = v;
    rep.payload["gradient_weights"] = g;
  }
  {
    nlohmann::json th = nlohmann::json::array();
    for (const auto& t : pr.theta)
      th.push_back({{"theta_plus", t.theta_plus},
                    {"theta_minus", t.theta_minus},
                    {"prefactor", t.prefactor},
                    {"cross_block_abc", t.abc}});
    rep.payload["theta"] = th;
    rep.payload["theta_rs"] =
        std::isnan(pr.theta_rs) ? nlohmann::json() : nlohmann::json(pr.theta_rs);
  }
  rep.payload["ledger"] = {{"chi0", pr.ledger.chi0},
                           {"chi1", pr.ledger.chi1},
                           {"chi2", pr.ledger.chi2},
                           {"c1", pr.ledger.c1},
                           {"c2", pr.ledger.c2},
                           {"c3", pr.ledger.c3},
                           {"removed_at", pr.ledger.removed_at},
                           {"degenerate", pr.ledger.degenerate}};
  if (!pr.cycle_averages.empty())
    rep.payload["cycle_averages"] = pr.cycle_averages;

  // per-point table
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < spec.critical_points.size(); ++i) {
    const auto& p = spec.critical_points[i];
    const auto it = pr.gamma.find(static_cast<int>(i));
    rows.push_back({static_cast<double>(i), p.location[0], p.location[1],
                    p.value, it == pr.gamma.end() ? 0.0 : it->second});
  }
  ensure_dir(cfg.out_dir);
  write_csv(cfg.out_dir + "/predictors.csv", "index,x0,x1,value,gamma", rows);
  return finish(rep, cfg.out_dir);
}

int cmd_blowup(const RunConfig& cfg) {
  const ScenarioSpec spec = resolve_scenario(cfg);
  RunConfig c = cfg;
  if (c.eps_list.empty()) c.eps_list = {0.004, 0.002, 0.001};
  c.require_eps_decreasing();

  SweepOptions opts;
  opts.resolution = c.resolution;
  opts.resolution_y = c.resolution_y;
  opts.solve.tol = c.tol;
  const SweepResult sw = sweep(spec, c.eps_list, opts);
  const double delta = c.delta > 0 ? c.delta : default_delta(spec);
  const MeasureKind kind = pick_measure(spec, c.measure, sw.gauge_used);

  RunReport rep;
  rep.command = "blowup";
  rep.scenario = spec.name;
  ensure_dir(c.out_dir);

  std::vector<std::vector<double>> conc_rows;
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& sp : sw.points) {
    if (!sp.ok) continue;
    const ConcentrationReport cr =
        concentration_masses(sp.pair, spec, sw.grid, sp.eps, delta, kind);
    nlohmann::json jb;
    jb["eps"] = sp.eps;
    nlohmann::json regions = nlohmann::json::array();
    for (std::size_t r = 0; r < cr.regions.size(); ++r) {
      conc_rows.push_back({sp.eps, static_cast<double>(r), cr.regions[r].mass,
                           cr.regions[r].f});
      regions.push_back({{"label", cr.regions[r].label},
                         {"mass", cr.regions[r].mass},
                         {"f", cr.regions[r].f}});
    }
    jb["regions"] = regions;
    jb["remainder"] = cr.remainder;

    // profiles at the selected points
    nlohmann::json profs = nlohmann::json::array();
    const bool gradient = spec.field.kind != FieldKind::zero;
    for (std::size_t i = 0; i < spec.critical_points.size(); ++i) {
      const auto& p = spec.critical_points[i];
      std::vector<double> target;
      if (gradient && !p.hessian_phi.empty()) {
        for (double h : p.hessian_phi) target.push_back(0.5 * std::abs(h));
      } else if (!p.quad.empty()) {
        for (double q : p.quad) target.push_back(std::sqrt(q));
      } else {
        continue;
      }
      // shrink the blow-up window when the default ball would leave the
      // domain at this eps
      const double scale = std::pow(sp.eps, gradient ? 0.5 : 0.25);
      double y_rad = 6.0;
      for (int a = 0; a < sw.grid.dim; ++a) {
        if (sw.grid.axis[a].periodic) continue;
        const double room = std::min(p.location[a] - sw.grid.axis[a].lo,
                                     sw.grid.axis[a].hi - p.location[a]);
        y_rad = std::min(y_rad, 0.95 * room / scale);
      }
      if (y_rad < 2.0) continue;  // too close to the boundary at this eps
      try {
        const BlowupProfile prof = extract_profile(
            sp.pair, sw.grid, p.location, sp.eps, gradient ? 0.5 : 0.25, y_rad,
            target, 121);
        profs.push_back({{"point", i},
                         {"l2_distance", prof.l2_distance},
                         {"fitted_quad", prof.fitted_quad},
                         {"fit_ok", prof.fit_ok}});
        if (&sp == &sw.points.back()) {
          std::vector<std::vector<double>> prows;
          for (int t = 0; t < static_cast<int>(prof.w.size()); ++t) {
            const Pt y = prof.y_point(t);
            double fitv = prof.fitted_amplitude;
            for (int a = 0; a < prof.dim; ++a)
              fitv *= std::exp(-0.5 * prof.fitted_quad[a] * y[a] * y[a]);
            prows.push_back({y[0], y[1], prof.w[t], fitv});
          }
          write_csv(c.out_dir + "/profile_point" + std::to_string(i) + ".csv",
                    "y0,y1,w,gaussian_fit", prows);
        }
      } catch (const std::out_of_range&) {
        // ball exits the domain at this eps; skip the profile
      }
    }
    jb["profiles"] = profs;
    blocks.push_back(jb);
  }
  rep.payload["blocks"] = blocks;
  rep.payload["delta"] = delta;
  write_csv(c.out_dir + "/concentration.csv", "eps,region,mass,f", conc_rows);
  return finish(rep, c.out_dir);
}

int cmd_fk_verify(const RunConfig& cfg, const IniFile& ini) {
  const std::vector<double> lams =
      ini.has("fk.lambda") ? ini.get_list("fk.lambda")
                           : std::vector<double>{0.5, 2.0};
  const std::vector<double> mus =
      ini.has("fk.mu") ? ini.get_list("fk.mu") : std::vector<double>{0.0, 1.0};
  const std::vector<double> xs = ini.has("fk.x")
                                     ? ini.get_list("fk.x")
                                     : std::vector<double>{-0.5, 0.0, 0.5};
  const std::vector<double> ts = ini.has("fk.t")
                                     ? ini.get_list("fk.t")
                                     : std::vector<double>{0.25, 0.5, 1.0};

  RunReport rep;
  rep.command = "fk-verify";
  rep.scenario = "fk-kernel";
  std::vector<std::vector<double>> rows;
  double max_z = 0;
  int block = 0;
  for (double lam : lams)
    for (double mu : mus) {
      const KernelCheck chk = verify_kernel(lam, mu, xs, ts, cfg.n_paths,
                                            cfg.dt, cfg.seed + 100000 * block);
      for (const auto& r : chk.rows)
        rows.push_back({r.x, r.t, r.closed_form, r.mc_mean, r.mc_se, r.z});
      max_z = std::max(max_z, chk.max_abs_z);
      ++block;
    }
  rep.add_le("max-abs-z", max_z, 3.0, "noyau");
  ensure_dir(cfg.out_dir);
  write_csv(cfg.out_dir + "/fk_table.csv", "x,t,closed_form,mc_mean,mc_se,z",
            rows);
  return finish(rep, cfg.out_dir);
}

int cmd_lyapunov(const RunConfig& cfg) {
  const ScenarioSpec spec = resolve_scenario(cfg);
  RunReport rep;
  rep.command = "lyapunov";
  rep.scenario = spec.name;

  nlohmann::json certs = nlohmann::json::array();
  const VectorFn field = [&spec](const Pt& x) {
    return spec.field.drift(x, spec.domain.dim);
  };
  if (spec.field.kind != FieldKind::zero) {
    for (std::size_t i = 0; i < spec.critical_points.size(); ++i) {
      const auto& p = spec.critical_points[i];
      nlohmann::json jc;
      jc["point"] = i;
      jc["center"] = {p.location[0], p.location[1]};
      try {
        const LocalLyapunov loc =
            local_lyapunov_point(field, p.location, cfg.mu, spec.domain.dim);
        const DescentReport dr = descent_check(
            loc.L,
            loc.repellor ? VectorFn([field, &spec](const Pt& x) {
              Pt v = field(x);
              for (int k = 0; k < spec.domain.dim; ++k) v[k] = -v[k];
              return v;
            })
                         : field,
            {pt(p.location[0] + 0.5 * loc.validity_radius, p.location[1])},
            10.0, 1e-10, spec.domain.dim,
            std::make_pair(p.location, 4.0 * loc.validity_radius));
        jc["repellor"] = loc.repellor;
        jc["mu"] = cfg.mu;
        jc["min_psi_off_center"] = loc.min_psi_sampled;
        jc["descent_margin"] = dr.max_increment;
        jc["certified"] = loc.min_psi_sampled > 0;
      } catch (const std::exception& e) {
        jc["error"] = e.what();
      }
      certs.push_back(jc);
    }
  }
  for (const auto& cyc : spec.cycles) {
    nlohmann::json jc;
    jc["cycle_r0"] = cyc.r0;
    jc["beta"] = cfg.beta;
    // certify the orientation that contracts onto the cycle: L must
    // decrease along the certified flow, so pick the sign with inward
    // radial drift just off the cycle
    const VectorFn fwd = spec.field.b;
    const bool reverse = fwd(pt(cyc.r0 + 0.05, 0.0))[0] > 0;
    const VectorFn use = reverse ? VectorFn([fwd](const Pt& x) {
      const Pt v = fwd(x);
      return pt(-v[0], -v[1]);
    })
                                 : fwd;
    jc["orientation"] = reverse ? "reversed-field" : "field";
    try {
      const LocalLyapunov loc =
          local_lyapunov_cycle_planar(use, cyc.r0, cfg.beta, 0.45);
      jc["min_psi_off_center"] = loc.min_psi_sampled;
      jc["certified"] = true;
      rep.add_flag("cycle-psi-positive", loc.min_psi_sampled > 0,
                   "thfdtpr-cycle");
    } catch (const std::exception& e) {
      jc["error"] = e.what();
      jc["certified"] = false;
      rep.add_flag("cycle-psi-positive", false, "thfdtpr-cycle");
    }
    certs.push_back(jc);
  }
  rep.payload["certificates"] = certs;
  ensure_dir(cfg.out_dir);
  write_json(rep.payload, cfg.out_dir + "/certificate.json");
  return finish(rep, cfg.out_dir);
}

int cmd_reproduce(const RunConfig& cfg) {
  const RunReport rep = run_recipe(cfg.reproduce_tag, cfg.seed);
  return finish(rep, cfg.out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "verification lab for principal-eigenpair concentration: solves the "
      "eigenproblem across eps sweeps and checks closed-form predictions"};
  app.require_subcommand(1);

  std::string config_path, scenario, out_dir, measure, tag;
  std::vector<double> eps;
  int resolution = 0, resolution_y = 0, n_paths = 0;
  double seed = -1, tol = 0, delta = 0, beta = 0, mu = 0, dt = 0;
  bool dump = false, central = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key-value config file");
    sub->add_option("--scenario", scenario, "built-in scenario name");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--eps", eps, "eps list (decreasing)");
    sub->add_option("--resolution", resolution, "nodes per axis");
    sub->add_option("--resolution-y", resolution_y, "nodes on axis 1");
    sub->add_option("--tol", tol, "solver tolerance");
    sub->add_option("--delta", delta, "concentration ball radius");
    sub->add_option("--measure", measure,
                    "plain-u2 | weighted-phi | weighted-L | auto");
    sub->add_option("--n-paths", n_paths, "Monte-Carlo paths");
    sub->add_option("--dt", dt, "Monte-Carlo time step");
    sub->add_option("--beta", beta, "cycle Lyapunov scale");
    sub->add_option("--mu", mu, "matrix equation parameter");
    sub->add_flag("--dump-matrix", dump, "write matrix.txt (coordinate text)");
    sub->add_flag("--central", central, "central drift discretization");
  };

  CLI::App* solve = app.add_subcommand("solve", "single-eps eigensolve + dump");
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "eps sweep + expansion fit + tracks");
  CLI::App* predict =
      app.add_subcommand("predict", "closed-form predictors only, no PDE");
  CLI::App* blow =
      app.add_subcommand("blowup", "profiles + masses + modulating ratios");
  CLI::App* fk = app.add_subcommand("fk-verify", "Monte-Carlo kernel check");
  CLI::App* lyap =
      app.add_subcommand("lyapunov", "local Lyapunov certificates");
  CLI::App* repro = app.add_subcommand("reproduce", "canned verification runs");
  repro->add_option("tag", tag,
                    "one of: potential-theorem thnf-profile th4-weights "
                    "thhk-expansion tp-gradient thfdtpr-cycle noyau "
                    "appendix2-decay");
  for (CLI::App* sub : {solve, sweep_cmd, predict, blow, fk, lyap, repro})
    add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    IniFile ini;
    if (!config_path.empty()) ini = IniFile::load(config_path);
    RunConfig cfg = RunConfig::from_ini(ini);
    if (!scenario.empty()) cfg.scenario_name = scenario;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!eps.empty()) cfg.eps_list = eps;
    if (resolution > 0) cfg.resolution = resolution;
    if (resolution_y > 0) cfg.resolution_y = resolution_y;
    if (tol > 0) cfg.tol = tol;
    if (delta > 0) cfg.delta = delta;
    if (!measure.empty()) cfg.measure = measure;
    if (n_paths > 0) cfg.n_paths = n_paths;
    if (dt > 0) cfg.dt = dt;
    if (beta > 0) cfg.beta = beta;
    if (mu > 0) cfg.mu = mu;
    if (dump) cfg.dump_matrix = true;
    if (central) cfg.upwind = false;
    if (!tag.empty()) cfg.reproduce_tag = tag;

    if (solve->parsed()) return cmd_solve(cfg);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg);
    if (predict->parsed()) return cmd_predict(cfg);
    if (blow->parsed()) return cmd_blowup(cfg);
    if (fk->parsed()) return cmd_fk_verify(cfg, ini);
    if (lyap->parsed()) return cmd_lyapunov(cfg);
    if (repro->parsed()) return cmd_reproduce(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
