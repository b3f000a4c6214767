#include "lab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lab/hermite.hpp"
#include "lab/numerics.hpp"

namespace lab {

namespace {

constexpr double kTieTol = 1e-9;  // relative tolerance for arg-min sets

bool tied(double v, double best) {
  return v <= best + kTieTol * std::max(1.0, std::abs(best));
}

double sum_sqrt_quad(const CriticalPointData& p) {
  if (p.quad.empty())
    throw std::invalid_argument("critical point without quad data");
  double s = 0;
  for (double q : p.quad) {
    if (!(q > 0)) throw std::invalid_argument("quad entries must be positive");
    s += std::sqrt(q);
  }
  return s;
}

double prod_quad_pow(const std::vector<double>& quad, double expo) {
  double s = 1;
  for (double q : quad) s *= std::pow(q, expo);
  return s;
}

}  // namespace

LambdaCap lambda_cap(const std::vector<CriticalPointData>& points) {
  if (points.empty()) throw std::invalid_argument("lambda_cap: no points");
  LambdaCap out;
  double vmin = 1e300;
  for (const auto& p : points) vmin = std::min(vmin, p.value);
  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    if (tied(points[i].value, vmin)) out.c_min.push_back(i);
  if (out.c_min.empty()) throw std::runtime_error("lambda_cap: empty C_min");

  double best = 1e300;
  for (int i : out.c_min) {
    const double s = sum_sqrt_quad(points[i]);
    out.sum_sqrt.push_back(s);
    best = std::min(best, s);
  }
  out.lambda_cap = best;
  for (std::size_t k = 0; k < out.c_min.size(); ++k)
    if (tied(out.sum_sqrt[k], best)) out.c_minmin.push_back(out.c_min[k]);
  return out;
}

std::map<int, double> concentration_weights(
    const std::vector<CriticalPointData>& points,
    const std::vector<int>& c_minmin, const std::map<int, double>& f) {
  if (c_minmin.empty())
    throw std::invalid_argument("concentration_weights: empty point set");
  double fmax = 0;
  for (int i : c_minmin) {
    const auto it = f.find(i);
    fmax = std::max(fmax, it == f.end() ? 0.0 : it->second);
  }
  if (fmax < 1.0 - 1e-9)
    throw std::runtime_error(
        "concentration_weights: no maximally charged point (max f < 1)");

  std::map<int, double> w;
  double total = 0;
  for (int i : c_minmin) {
    const auto it = f.find(i);
    const double fp = it == f.end() ? 0.0 : it->second;
    const double v = fp * fp * prod_quad_pow(points[i].quad, -0.25);
    w[i] = v;
    total += v;
  }
  for (auto& [i, v] : w) v /= total;
  return w;
}

Pressure topological_pressure(const std::vector<CriticalPointData>& points) {
  Pressure out;
  double best = 1e300;
  for (const auto& p : points) {
    if (p.hessian_phi.empty())
      throw std::invalid_argument(
          "topological_pressure: point without field eigenvalues");
    double neg = 0;
    for (double h : p.hessian_phi) neg += std::min(0.0, h);
    const double contrib = p.value - neg;
    out.contributions.push_back(contrib);
    best = std::min(best, contrib);
  }
  out.value = best;
  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    if (tied(out.contributions[i], best)) out.arg_set.push_back(i);
  return out;
}

std::map<int, double> gradient_weights(
    const std::vector<CriticalPointData>& points, const std::vector<int>& set) {
  if (set.empty()) throw std::invalid_argument("gradient_weights: empty set");
  std::map<int, double> w;
  double total = 0;
  for (int i : set) {
    double v = 1;
    for (double h : points[i].hessian_phi) {
      if (std::abs(h) < 1e-12)
        throw std::runtime_error("gradient_weights: non-hyperbolic point");
      v *= 1.0 / std::sqrt(std::abs(h));
    }
    w[i] = v;
    total += v;
  }
  for (auto& [i, v] : w) v /= total;
  return w;
}

std::vector<double> hermite_spectrum(const std::vector<double>& quad, int k_max) {
  for (double q : quad)
    if (!(q > 0)) throw std::invalid_argument("hermite_spectrum: quad > 0 required");
  const int m = static_cast<int>(quad.size());
  std::vector<double> out;
  if (m == 1) {
    for (int k = 0; k <= k_max; ++k)
      out.push_back((2.0 * k + 1.0) * std::sqrt(quad[0]));
  } else {
    for (int k0 = 0; k0 <= k_max; ++k0)
      for (int k1 = 0; k1 <= k_max; ++k1)
        out.push_back((2.0 * k0 + 1.0) * std::sqrt(quad[0]) +
                      (2.0 * k1 + 1.0) * std::sqrt(quad[1]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double theta_norm_constant(const std::vector<CriticalPointData>& points,
                           const std::vector<int>& c_minmin,
                           const std::map<int, double>& f) {
  const int m = static_cast<int>(points[c_minmin.front()].quad.size());
  double s = 0;
  for (int i : c_minmin) {
    const auto it = f.find(i);
    const double fp = it == f.end() ? 1.0 : it->second;
    s += fp * fp * prod_quad_pow(points[i].quad, -0.25);
  }
  return 1.0 / (std::pow(2.0 * M_PI, 0.5 * m) * s);
}

ThetaTerms theta_predictor(const CriticalPointData& p, double f_p, double K) {
  const int m = static_cast<int>(p.quad.size());
  ThetaTerms t;
  t.prefactor =
      std::pow(M_PI, 0.5 * m) * K * f_p * f_p * prod_quad_pow(p.quad, -0.25);
  t.prefactor_single_well = std::pow(2.0, -0.5 * m);

  t.curvature = -0.25 * p.curvature_R;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      t.curvature -=
          (1.0 / 12.0) * p.rijij(i, j, m) * std::sqrt(p.quad[i] / p.quad[j]);

  for (int i = 0; i < m; ++i) {
    t.quartic += 0.5 * p.quartic_ord(i, i, i, i) / p.quad[i];
    for (int j = i + 1; j < m; ++j)
      t.quartic +=
          0.25 * p.quartic_ord(i, i, j, j) / std::sqrt(p.quad[i] * p.quad[j]);
  }

  double A = 0, B = 0, C = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        const double c = p.cubic_ord(i, j, k);
        A += c * c /
             (16.0 * std::sqrt(p.quad[i] * p.quad[j] * p.quad[k]) *
              (std::sqrt(p.quad[i]) + std::sqrt(p.quad[j]) + std::sqrt(p.quad[k])));
      }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double ciij = p.cubic_ord(i, i, j);
      const double cijj = p.cubic_ord(i, j, j);
      B += ciij * ciij / (8.0 * p.quad[i] * std::sqrt(p.quad[j])) +
           cijj * cijj / (8.0 * p.quad[j] * std::sqrt(p.quad[i]));
      C += (ciij * ciij + cijj * cijj) / (16.0 * p.quad[i] * p.quad[j]);
    }
  for (int i = 0; i < m; ++i) {
    const double ciii = p.cubic_ord(i, i, i);
    C += ciii * ciii / (8.0 * p.quad[i] * p.quad[i]);
  }
  t.abc = A + B + C;
  t.theta_plus = t.prefactor * (t.curvature + t.quartic + t.abc);
  t.theta_minus = t.prefactor * (t.curvature + t.quartic - t.abc);
  return t;
}

double theta_oracle_rs(const CriticalPointData& p, int levels) {
  const int m = static_cast<int>(p.quad.size());
  if (m == 2) {
    // separability: no cross couplings
    const double cross =
        std::abs(p.cubic_ord(0, 0, 1)) + std::abs(p.cubic_ord(0, 1, 1)) +
        std::abs(p.quartic_ord(0, 0, 0, 1)) + std::abs(p.quartic_ord(0, 0, 1, 1)) +
        std::abs(p.quartic_ord(0, 1, 1, 1));
    if (cross > 1e-14)
      throw std::logic_error("theta_oracle_rs: non-separable point data");
  }
  double theta = 0;
  for (int axis = 0; axis < m; ++axis) {
    const double lam = p.quad[axis];
    const double c3 = p.cubic_ord(axis, axis, axis);
    const double c4 =
        m == 1 ? p.quartic_ord(0, 0, 0, 0)
               : p.quartic_ord(axis, axis, axis, axis);

    OscillatorExpansion g = OscillatorExpansion::ground(1, {lam});
    const OscillatorExpansion y2 = g.multiplied_by_y(0).multiplied_by_y(0);
    theta += c4 * y2.norm2();  // <y^4>_0 = || y^2 |0> ||^2

    if (c3 != 0) {
      const OscillatorExpansion y3 = y2.multiplied_by_y(0);
      for (const auto& [k, coef] : y3.coef()) {
        if (k[0] == 0 || k[0] > levels) continue;
        const double gap = y3.excitation(k);
        theta -= (c3 * coef) * (c3 * coef) / gap;
      }
    }
  }
  return theta;
}

double fk_kernel(double lam, double mu, double x, double t) {
  if (!(lam > 0)) throw std::invalid_argument("fk_kernel: lambda > 0 required");
  if (t < 0) throw std::invalid_argument("fk_kernel: t >= 0 required");
  const double w = t * std::sqrt(2.0 * lam);
  const double xs = x + 0.5 * mu;
  return std::exp(-std::sqrt(0.5 * lam) * std::tanh(w) * xs * xs +
                  0.25 * lam * mu * mu * t) /
         std::sqrt(std::cosh(w));
}

ChiLedger chi_ledger(const std::vector<CriticalPointData>& points,
                     const std::map<int, double>& f, double K) {
  ChiLedger led;
  const LambdaCap cap = lambda_cap(points);
  led.c1 = cap.c_min;
  led.chi0 = points[cap.c_min.front()].value;
  led.chi1 = cap.lambda_cap;
  led.c2 = cap.c_minmin;

  double best = 1e300;
  std::vector<double> theta(points.size(), 0.0);
  for (int i : led.c2) {
    const auto it = f.find(i);
    const double fp = it == f.end() ? 1.0 : it->second;
    theta[i] = theta_predictor(points[i], fp, K).theta_plus;
    best = std::min(best, theta[i]);
  }
  led.chi2 = best;
  for (int i : led.c2)
    if (tied(theta[i], best)) led.c3.push_back(i);

  if (led.c1.size() == 1)
    led.removed_at = 0;
  else if (led.c2.size() == 1)
    led.removed_at = 1;
  else if (led.c3.size() == 1)
    led.removed_at = 2;
  led.degenerate = led.c3.size() > 1;
  return led;
}

double cycle_average(const ScalarFn& c, const CycleSpec& cycle, int panels) {
  double s = 0;
  const double h = cycle.period / panels;
  for (int i = 0; i < panels; ++i) s += c(cycle.parametrize(i * h));
  return s / panels;
}

PredictorReport predictor_report(const ScenarioSpec& spec) {
  PredictorReport rep;
  const auto& pts = spec.critical_points;

  if (!pts.empty()) {
    rep.min_c = 1e300;
    for (const auto& p : pts) rep.min_c = std::min(rep.min_c, p.value);
  }

  const bool have_quad =
      !pts.empty() &&
      std::all_of(pts.begin(), pts.end(),
                  [](const CriticalPointData& p) { return !p.quad.empty(); });
  const bool gradient_data =
      !pts.empty() &&
      std::all_of(pts.begin(), pts.end(), [](const CriticalPointData& p) {
        return !p.hessian_phi.empty();
      });

  if (have_quad) {
    rep.cap = lambda_cap(pts);
    std::map<int, double> f;
    for (int i : rep.cap.c_minmin) f[i] = 1.0;
    rep.gamma = concentration_weights(pts, rep.cap.c_minmin, f);
    const double K = theta_norm_constant(pts, rep.cap.c_minmin, f);
    for (int i : rep.cap.c_minmin)
      rep.theta.push_back(theta_predictor(pts[i], 1.0, K));
    try {
      rep.theta_rs = theta_oracle_rs(pts[rep.cap.c_minmin.front()]);
    } catch (const std::logic_error&) {
      rep.theta_rs = std::numeric_limits<double>::quiet_NaN();
    }
    rep.ledger = chi_ledger(pts, f, K);
  }
  if (gradient_data) {
    rep.pressure = topological_pressure(pts);
    rep.gradient_w = gradient_weights(pts, rep.pressure.arg_set);
  }
  for (const auto& cyc : spec.cycles)
    rep.cycle_averages.push_back(cycle_average(spec.c, cyc));
  return rep;
}

}  // namespace lab
