#include "lab/blowup.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lab/numerics.hpp"

namespace lab {

namespace {

double trapezoid_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

}  // namespace

Pt BlowupProfile::y_point(int flat) const {
  const double h = 2.0 * y_radius / (n_per_axis - 1);
  Pt y{0, 0};
  if (dim == 1) {
    y[0] = -y_radius + flat * h;
  } else {
    y[0] = -y_radius + (flat % n_per_axis) * h;
    y[1] = -y_radius + (flat / n_per_axis) * h;
  }
  return y;
}

BlowupProfile extract_profile(const EigenPair& pair, const Grid& grid,
                              const Pt& center, double eps,
                              double scale_exponent, double y_radius,
                              const std::vector<double>& target_quad,
                              int n_per_axis) {
  BlowupProfile prof;
  prof.center = center;
  prof.scale_exponent = scale_exponent;
  prof.eps = eps;
  prof.dim = grid.dim;
  prof.n_per_axis = n_per_axis;
  prof.y_radius = y_radius;

  const double scale = std::pow(eps, scale_exponent);
  for (int k = 0; k < grid.dim; ++k) {
    if (grid.axis[k].periodic) continue;
    const double room =
        std::min(center[k] - grid.axis[k].lo, grid.axis[k].hi - center[k]);
    if (scale * y_radius > room) {
      std::ostringstream os;
      os << "extract_profile: ball exits the domain on axis " << k
         << "; max admissible y radius is " << room / scale;
      throw std::out_of_range(os.str());
    }
  }

  const double sup = *std::max_element(pair.u.begin(), pair.u.end());
  if (!(sup > 0)) throw std::runtime_error("extract_profile: zero eigenfunction");

  const int total = grid.dim == 1 ? n_per_axis : n_per_axis * n_per_axis;
  prof.w.resize(total);
  prof.w_min = 1e300;
  prof.w_max = -1e300;
  for (int t = 0; t < total; ++t) {
    const Pt y = prof.y_point(t);
    Pt x = center;
    for (int k = 0; k < grid.dim; ++k) x[k] += scale * y[k];
    const double w = grid.interpolate(pair.u, x) / sup;
    prof.w[t] = w;
    prof.w_min = std::min(prof.w_min, w);
    prof.w_max = std::max(prof.w_max, w);
  }

  // least squares for -2 log w = a0 + sum_k q_k y_k^2 on w > 1e-8
  {
    std::vector<int> keep;
    for (int t = 0; t < total; ++t)
      if (prof.w[t] > 1e-8) keep.push_back(t);
    const int k = 1 + grid.dim;
    if (static_cast<int>(keep.size()) >= k + 2) {
      Eigen::MatrixXd A(keep.size(), k);
      Eigen::VectorXd b(keep.size());
      for (std::size_t r = 0; r < keep.size(); ++r) {
        const Pt y = prof.y_point(keep[r]);
        A(r, 0) = 1.0;
        for (int a = 0; a < grid.dim; ++a) A(r, 1 + a) = y[a] * y[a];
        b(r) = -2.0 * std::log(prof.w[keep[r]]);
      }
      const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
      prof.fitted_amplitude = std::exp(-0.5 * c(0));
      prof.fitted_quad.assign(c.data() + 1, c.data() + k);
      double qmax = 0;
      for (double q : prof.fitted_quad) qmax = std::max(qmax, std::abs(q));
      if (qmax < 1e-8) {
        prof.fit_ok = false;
        prof.fit_message = "no curvature";
      } else {
        prof.fit_ok = true;
      }
    } else {
      prof.fit_ok = false;
      prof.fit_message = "too few usable samples";
    }
  }

  // normalized L2 distance to the Gaussian target
  if (static_cast<int>(target_quad.size()) == grid.dim) {
    double nw = 0, ng = 0;
    std::vector<double> g(total);
    for (int t = 0; t < total; ++t) {
      const Pt y = prof.y_point(t);
      double wt = 1, gv = 1;
      for (int a = 0; a < grid.dim; ++a) {
        const int ia = a == 0 ? t % n_per_axis : t / n_per_axis;
        wt *= trapezoid_weight(ia, n_per_axis);
        gv *= std::exp(-0.5 * target_quad[a] * y[a] * y[a]);
      }
      g[t] = gv;
      nw += wt * prof.w[t] * prof.w[t];
      ng += wt * gv * gv;
    }
    double d2 = 0;
    for (int t = 0; t < total; ++t) {
      double wt = 1;
      for (int a = 0; a < grid.dim; ++a) {
        const int ia = a == 0 ? t % n_per_axis : t / n_per_axis;
        wt *= trapezoid_weight(ia, n_per_axis);
      }
      const double dw = prof.w[t] / std::sqrt(nw) - g[t] / std::sqrt(ng);
      d2 += wt * dw * dw;
    }
    prof.l2_distance = std::sqrt(d2);
  }
  return prof;
}

double default_delta(const ScenarioSpec& spec) {
  const double cap = 0.25 * spec.domain.diameter();
  double dmin = 1e300;
  const auto& pts = spec.critical_points;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      dmin = std::min(dmin, dist(pts[i].location, pts[j].location,
                                 spec.domain.dim));
  for (const auto& cyc : spec.cycles) {
    dmin = std::min(dmin, spec.domain.bounds[0][1] - cyc.r0);
    dmin = std::min(dmin, cyc.r0 - spec.domain.bounds[0][0]);
  }
  return std::min(cap, 0.5 * dmin);
}

ConcentrationReport concentration_masses(const EigenPair& pair,
                                         const ScenarioSpec& spec,
                                         const Grid& grid, double eps,
                                         double delta, MeasureKind kind) {
  const auto& pts = spec.critical_points;
  const int dim = grid.dim;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (dist(pts[i].location, pts[j].location, dim) <
          2.0 * delta * (1.0 - 1e-12))
        throw std::invalid_argument(
            "concentration_masses: overlapping balls; reduce delta");

  ScalarFn expo;
  switch (kind) {
    case MeasureKind::plain_u2:
      break;
    case MeasureKind::weighted_phi:
      if (!spec.field.phi)
        throw std::logic_error("weighted-phi measure needs a phi handle");
      expo = spec.field.phi;
      break;
    case MeasureKind::weighted_L:
      if (!spec.field.lyapunov)
        throw std::logic_error("weighted-L measure needs a Lyapunov handle");
      expo = spec.field.lyapunov;
      break;
  }
  const std::vector<double> mass = weighted_measure(pair.u, expo, eps, grid);
  const double sup = *std::max_element(pair.u.begin(), pair.u.end());

  ConcentrationReport rep;
  rep.delta = delta;
  rep.kind = kind;

  double covered = 0;
  int idx = 0;
  for (const auto& p : pts) {
    RegionMass rm;
    rm.label = "point[" + std::to_string(idx++) + "]";
    double m = 0, fsup = 0;
    for (int fno = 0; fno < grid.n_free; ++fno) {
      if (dist(grid.point_of_free(fno), p.location, dim) >= delta) continue;
      m += mass[fno];
      fsup = std::max(fsup, pair.u[fno]);
    }
    rm.mass = m;
    rm.f = fsup / sup;
    covered += m;
    rep.regions.push_back(rm);
  }
  idx = 0;
  for (const auto& cyc : spec.cycles) {
    RegionMass rm;
    rm.label = "cycle[" + std::to_string(idx++) + "]";
    rm.is_band = true;
    double m = 0, fsup = 0;
    for (int fno = 0; fno < grid.n_free; ++fno) {
      if (std::abs(grid.point_of_free(fno)[0] - cyc.r0) >= delta) continue;
      m += mass[fno];
      fsup = std::max(fsup, pair.u[fno]);
    }
    rm.mass = m;
    rm.f = fsup / sup;
    covered += m;
    rep.regions.push_back(rm);
  }
  rep.remainder = 1.0 - covered;
  return rep;
}

ArgmaxTrack argmax_velocity(const SweepResult& sweep,
                            const std::vector<CriticalPointData>& points,
                            ScaleCase scase) {
  if (points.empty()) throw std::invalid_argument("argmax_velocity: no points");
  ArgmaxTrack tr;
  const int dim = sweep.grid.dim;
  for (const auto& sp : sweep.points) {
    if (!sp.ok) continue;
    int best = 0;
    double bd = 1e300;
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
      const double d = dist(sp.argmax, points[i].location, dim);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    tr.eps.push_back(sp.eps);
    tr.d.push_back(bd);
    tr.nearest.push_back(best);
    const double expo = scase == ScaleCase::potential ? 0.5 : 1.0;
    tr.bound_ratio.push_back(bd * bd / std::pow(sp.eps, expo));
    tr.d_over_sqrt.push_back(bd / std::sqrt(sp.eps));
  }
  for (std::size_t i = 1; i < tr.nearest.size(); ++i)
    if (tr.nearest[i] != tr.nearest[i - 1]) tr.split = true;

  // exponent fit over the strictly positive distances
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < tr.d.size(); ++i)
    if (tr.d[i] > 1e-12) {
      lx.push_back(std::log(tr.eps[i]));
      ly.push_back(std::log(tr.d[i]));
    }
  tr.fitted_exponent = lx.size() >= 2 ? fit_slope(lx, ly) : 0.0;

  // bounded: the ratio must not blow up as eps decreases; resolution-level
  // distances are treated as zero
  const double dres = 0.5 * sweep.grid.axis[0].h;
  double head = 0, tail = 0;
  const std::size_t nh = tr.bound_ratio.size() / 2;
  for (std::size_t i = 0; i < tr.bound_ratio.size(); ++i) {
    const double r = tr.d[i] <= dres ? 0.0 : tr.bound_ratio[i];
    if (i < nh || nh == 0)
      head = std::max(head, r);
    else
      tail = std::max(tail, r);
  }
  tr.bound_ok = tail <= std::max(1.05 * head, 1e-9);

  // gradient case: d / sqrt(eps) decreasing over the last 4 points
  if (tr.d_over_sqrt.size() >= 4) {
    bool dec = true;
    for (std::size_t i = tr.d_over_sqrt.size() - 3; i < tr.d_over_sqrt.size(); ++i)
      if (tr.d_over_sqrt[i] > tr.d_over_sqrt[i - 1] * (1.0 + 1e-9)) dec = false;
    tr.d_over_sqrt_decreasing = dec;
  }
  return tr;
}

SupnormFit supnorm_growth(const SweepResult& sweep, ScaleCase scase, int dim,
                          int tail_points) {
  SupnormFit fit;
  fit.expected = scase == ScaleCase::potential ? -dim / 8.0 : -dim / 4.0;
  for (const auto& sp : sweep.points) {
    if (!sp.ok) continue;
    fit.eps.push_back(sp.eps);
    fit.sup.push_back(sp.sup_u);
  }
  if (fit.eps.size() < 2)
    throw std::invalid_argument("supnorm_growth: need >= 2 converged points");
  std::size_t from = 0;
  if (tail_points > 0 && fit.eps.size() > static_cast<std::size_t>(tail_points))
    from = fit.eps.size() - tail_points;
  std::vector<double> lx, ly;
  for (std::size_t i = from; i < fit.eps.size(); ++i) {
    lx.push_back(std::log(fit.eps[i]));
    ly.push_back(std::log(fit.sup[i]));
  }
  fit.slope = fit_slope(lx, ly);
  const double mexp = scase == ScaleCase::potential ? 0.25 * dim : 0.5 * dim;
  const double s = fit.sup.back();
  fit.K = s * s * std::pow(fit.eps.back(), mexp);
  return fit;
}

DecayReport decay_off_wells(const SweepResult& sweep, const ScenarioSpec& spec,
                            double margin) {
  DecayReport rep;
  rep.margin = margin;
  const Grid& g = sweep.grid;
  std::vector<int> off;
  for (int f = 0; f < g.n_free; ++f) {
    const Pt p = g.point_of_free(f);
    bool outside = true;
    for (const auto& cp : spec.critical_points)
      if (dist(p, cp.location, g.dim) < margin) outside = false;
    for (const auto& cyc : spec.cycles)
      if (std::abs(p[0] - cyc.r0) < margin) outside = false;
    if (outside) off.push_back(f);
  }
  if (off.empty())
    throw std::invalid_argument("decay_off_wells: margin covers the domain");

  for (const auto& sp : sweep.points) {
    if (!sp.ok) continue;
    double mo = 0;
    for (int f : off) mo = std::max(mo, sp.pair.u[f]);
    const double ratio = std::max(mo / sp.sup_u, 1e-300);
    rep.eps.push_back(sp.eps);
    rep.ratio.push_back(ratio);
    rep.exponent.push_back(std::log(ratio) / std::log(sp.eps));
  }
  rep.exponent_increasing = rep.exponent.size() >= 2;
  for (std::size_t i = 1; i < rep.exponent.size(); ++i)
    if (rep.exponent[i] < rep.exponent[i - 1] - 1e-6)
      rep.exponent_increasing = false;
  return rep;
}

ExpansionFit fit_expansion(const std::vector<double>& eps,
                           const std::vector<double>& lambda) {
  if (eps.size() < 4 || eps.size() != lambda.size())
    throw std::invalid_argument("expansion fit needs >= 4 points");
  const auto [mn, mx] = std::minmax_element(eps.begin(), eps.end());
  if (*mx / *mn < 10.0 * (1.0 - 1e-9))
    throw std::invalid_argument("expansion fit needs a decade of eps");

  const LsqFit f = lsq_fit(
      eps, lambda,
      {[](double) { return 1.0; }, [](double e) { return std::sqrt(e); },
       [](double e) { return e; }});
  ExpansionFit out;
  out.c0 = f.coef[0];
  out.c1 = f.coef[1];
  out.c2 = f.coef[2];
  out.rms_residual = f.rms_residual;
  out.condition = f.condition;
  out.n_points = static_cast<int>(eps.size());
  out.eps_min = *mn;
  out.eps_max = *mx;
  out.ill_conditioned = f.condition > 1e8;
  return out;
}

ExpansionFit fit_expansion(const SweepResult& sweep) {
  std::vector<double> e, l;
  for (const auto& sp : sweep.points)
    if (sp.ok) {
      e.push_back(sp.eps);
      l.push_back(sp.pair.lambda);
    }
  return fit_expansion(e, l);
}

W1Correction w1_correction(const CriticalPointData& p) {
  const int m = static_cast<int>(p.quad.size());
  if (m < 1 || m > 2)
    throw std::invalid_argument("w1_correction: dimension must be 1 or 2");

  W1Correction out;
  out.point = &p;
  OscillatorExpansion rhs(m, p.quad);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = j; k < m; ++k) {
        const double c = p.cubic_ord(i, j, k);
        if (c == 0) continue;
        OscillatorExpansion term = OscillatorExpansion::ground(m, p.quad)
                                       .multiplied_by_y(i)
                                       .multiplied_by_y(j)
                                       .multiplied_by_y(k);
        for (const auto& [key, v] : term.coef()) rhs.add(key, c * v);
      }

  OscillatorExpansion w1(m, p.quad);
  for (const auto& [key, v] : rhs.coef()) {
    if (std::abs(v) < 1e-300) continue;
    const double exc = rhs.excitation(key);
    if (exc == 0) continue;  // multiple of w_P: fixed to zero
    w1.add(key, -v / exc);
  }

  for (const auto& [key, v] : w1.coef()) {
    W1Row row;
    row.index = key;
    row.coef_normalized = v;
    double conv = 1.0;
    for (int a = 0; a < m; ++a) {
      const double lam = p.quad[a];
      const int n = key[a];
      double lognorm = 0.125 * std::log(lam) - 0.25 * std::log(M_PI);
      for (int t = 1; t <= n; ++t) lognorm -= 0.5 * std::log(2.0 * t);
      conv *= std::exp(lognorm) * (n % 2 == 0 ? 1.0 : -1.0);
    }
    row.coef_h_basis = v * conv;
    out.table.push_back(row);
  }
  out.w1 = std::move(w1);
  return out;
}

double W1Correction::residual_max(int n, double radius) const {
  const CriticalPointData& p = *point;
  const int m = static_cast<int>(p.quad.size());
  double cap = 0;
  for (double q : p.quad) cap += std::sqrt(q);

  // rebuild the cubic forcing exactly as an expansion
  OscillatorExpansion rhs(m, p.quad);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      for (int k = j; k < m; ++k) {
        const double c = p.cubic_ord(i, j, k);
        if (c == 0) continue;
        OscillatorExpansion term = OscillatorExpansion::ground(m, p.quad)
                                       .multiplied_by_y(i)
                                       .multiplied_by_y(j)
                                       .multiplied_by_y(k);
        for (const auto& [key, v] : term.coef()) rhs.add(key, c * v);
      }

  const double h = 2.0 * radius / (n - 1);
  auto yv = [&](int i) { return -radius + i * h; };
  double worst = 0;

  auto second_fd = [&](const std::array<double, 2>& y, int axis) {
    std::array<double, 2> ym2 = y, ym1 = y, yp1 = y, yp2 = y;
    ym2[axis] -= 2 * h;
    ym1[axis] -= h;
    yp1[axis] += h;
    yp2[axis] += 2 * h;
    return (-w1.evaluate(ym2) + 16 * w1.evaluate(ym1) - 30 * w1.evaluate(y) +
            16 * w1.evaluate(yp1) - w1.evaluate(yp2)) /
           (12 * h * h);
  };

  if (m == 1) {
    for (int i = 2; i < n - 2; ++i) {
      const std::array<double, 2> y{yv(i), 0};
      const double q = p.quad[0] * y[0] * y[0];
      const double r = -second_fd(y, 0) + (q - cap) * w1.evaluate(y) +
                       rhs.evaluate(y);
      worst = std::max(worst, std::abs(r));
    }
  } else {
    for (int i = 2; i < n - 2; ++i)
      for (int j = 2; j < n - 2; ++j) {
        const std::array<double, 2> y{yv(i), yv(j)};
        const double q = p.quad[0] * y[0] * y[0] + p.quad[1] * y[1] * y[1];
        const double r = -second_fd(y, 0) - second_fd(y, 1) +
                         (q - cap) * w1.evaluate(y) + rhs.evaluate(y);
        worst = std::max(worst, std::abs(r));
      }
  }
  return worst;
}

}  // namespace lab
