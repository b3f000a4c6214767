#include "lab/scenario_library.hpp"

#include <cmath>
#include <stdexcept>

namespace lab {

namespace {

constexpr double kPi = 3.14159265358979323846;

CriticalPointData point1d(double x, double value, double quad, double cubic,
                          double quartic) {
  CriticalPointData p;
  p.location = pt(x);
  p.value = value;
  p.quad = {quad};
  p.cubic = SymTensor3(1);
  p.cubic.set_ordered(0, 0, 0, cubic);
  p.quartic0 = SymTensor4(1);
  p.quartic0.set_ordered(0, 0, 0, 0, quartic);
  return p;
}

ScenarioSpec double_well_1d() {
  // Steepness 45 puts the Agmon distance to the margin-0.3 compact set
  // near 0.54, so the off-well ratio at eps = 1e-3 sits around 3e-8.
  ScenarioSpec s;
  s.name = "double-well-1d";
  s.description = "c = 45 (x^2-1)^2 + 1 on [-2,2], symmetric wells at +-1";
  s.domain = {DomainKind::interval, 1, {{{-2, 2}, {0, 1}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
  s.c = [](const Pt& p) {
    const double q = p[0] * p[0] - 1.0;
    return 45.0 * q * q + 1.0;
  };
  s.critical_points = {point1d(-1, 1, 180, -180, 45),
                       point1d(1, 1, 180, 180, 45)};
  return s;
}

ScenarioSpec asymmetric_well_1d() {
  ScenarioSpec s;
  s.name = "asymmetric-well-1d";
  s.description =
      "c = 1 + (x^2-1)^2 (1 + x/4): equal depths, curvatures 3 and 5";
  s.domain = {DomainKind::interval, 1, {{{-2, 2}, {0, 1}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
  s.c = [](const Pt& p) {
    const double q = p[0] * p[0] - 1.0;
    return 1.0 + q * q * (1.0 + 0.25 * p[0]);
  };
  s.critical_points = {point1d(-1, 1, 3, -2, -0.25), point1d(1, 1, 5, 6, 2.25)};
  return s;
}

ScenarioSpec quartic_well_1d() {
  // quad = 2 keeps the eps^(3/2) tail small against the eps coefficient,
  // so the three-term fit resolves the quartic correction cleanly
  ScenarioSpec s;
  s.name = "quartic-well-1d";
  s.description = "c = 1 + 2 x^2 + x^4/2, single well with quartic correction";
  s.domain = {DomainKind::interval, 1, {{{-2, 2}, {0, 1}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
  s.c = [](const Pt& p) {
    const double x2 = p[0] * p[0];
    return 1.0 + 2.0 * x2 + 0.5 * x2 * x2;
  };
  s.critical_points = {point1d(0, 1, 2, 0, 0.5)};
  return s;
}

ScenarioSpec harmonic_1d() {
  ScenarioSpec s;
  s.name = "harmonic-1d";
  s.description = "c = 1 + x^2; ground state exp(-x^2 / (2 sqrt(eps)))";
  s.domain = {DomainKind::interval, 1, {{{-4, 4}, {0, 1}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
  s.c = [](const Pt& p) { return 1.0 + p[0] * p[0]; };
  CriticalPointData p = point1d(0, 1, 1, 0, 0);
  s.critical_points = {p};
  return s;
}

ScenarioSpec gradient_well_1d() {
  ScenarioSpec s;
  s.name = "gradient-well-1d";
  s.description =
      "drift = grad(phi), phi = (x^2-1)^2/2; c tilts the pressure to x = -1";
  s.domain = {DomainKind::interval, 1, {{{-2, 2}, {0, 1}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
  s.c = [](const Pt& p) { return 2.0 + 0.5 * std::sin(0.25 * kPi * p[0]); };
  s.field.kind = FieldKind::gradient_of_phi;
  s.field.phi = [](const Pt& p) {
    const double q = p[0] * p[0] - 1.0;
    return 0.5 * q * q;
  };
  s.field.grad_phi = [](const Pt& p) {
    return pt(2.0 * p[0] * (p[0] * p[0] - 1.0));
  };
  s.field.laplacian_phi = [](const Pt& p) { return 6.0 * p[0] * p[0] - 2.0; };

  const double s2 = 0.5 * std::sqrt(0.5);  // 0.5 sin(pi/4)
  CriticalPointData left;
  left.location = pt(-1);
  left.value = 2.0 - s2;
  left.hessian_phi = {4};
  CriticalPointData mid;
  mid.location = pt(0);
  mid.value = 2.0;
  mid.hessian_phi = {-2};
  CriticalPointData right;
  right.location = pt(1);
  right.value = 2.0 + s2;
  right.hessian_phi = {4};
  s.critical_points = {left, mid, right};
  return s;
}

ScenarioSpec gradient_2d() {
  ScenarioSpec s;
  s.name = "gradient-2d";
  s.description =
      "phi = (x^2-1)^2/2 + y^2 on the box; wells at (+-1, 0), saddle at 0";
  s.domain = {DomainKind::box, 2, {{{-2, 2}, {-2, 2}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::dirichlet_zero}};
  s.c = [](const Pt& p) {
    return 2.0 + 0.5 * std::sin(0.25 * kPi * p[0]) +
           0.25 * std::sin(0.25 * kPi * p[1]);
  };
  s.field.kind = FieldKind::gradient_of_phi;
  s.field.phi = [](const Pt& p) {
    const double q = p[0] * p[0] - 1.0;
    return 0.5 * q * q + p[1] * p[1];
  };
  s.field.grad_phi = [](const Pt& p) {
    return pt(2.0 * p[0] * (p[0] * p[0] - 1.0), 2.0 * p[1]);
  };
  s.field.laplacian_phi = [](const Pt& p) { return 6.0 * p[0] * p[0]; };

  const double s2 = 0.5 * std::sqrt(0.5);
  CriticalPointData left;
  left.location = pt(-1, 0);
  left.value = 2.0 - s2;
  left.hessian_phi = {4, 2};
  CriticalPointData saddle;
  saddle.location = pt(0, 0);
  saddle.value = 2.0;
  saddle.hessian_phi = {-2, 2};
  CriticalPointData right;
  right.location = pt(1, 0);
  right.value = 2.0 + s2;
  right.hessian_phi = {4, 2};
  s.critical_points = {left, saddle, right};
  return s;
}

ScenarioSpec annulus_cycle() {
  // The associated killed diffusion drifts along -b, so b_r = r - 1 is
  // the orientation whose particle is attracted to the cycle and whose
  // eigenvalue settles at the cycle average of c. The contraction that
  // the Lyapunov certificate needs lives on the reversed field (1-r, .).
  ScenarioSpec s;
  s.name = "annulus-cycle";
  s.description =
      "annulus 0.5 < r < 1.5, b = ((r-1), 1), cycle at r = 1";
  s.domain = {DomainKind::annulus_polar, 2, {{{0.5, 1.5}, {0, 2 * kPi}}},
              {BoundaryKind::dirichlet_zero, BoundaryKind::periodic}};
  s.c = [](const Pt& p) {
    const double d = p[0] - 1.0;
    return 2.0 + 5.0 * d * d;
  };
  s.field.kind = FieldKind::general;
  s.field.b = [](const Pt& p) { return pt(p[0] - 1.0, 1.0); };
  s.field.lyapunov = [](const Pt& p) {
    const double d = p[0] - 1.0;
    return 2.0 * d * d;
  };
  s.field.grad_lyapunov = [](const Pt& p) { return pt(4.0 * (p[0] - 1.0), 0.0); };

  CycleSpec cyc;
  cyc.r0 = 1.0;
  cyc.period = 2 * kPi;
  cyc.parametrize = [](double t) { return pt(1.0, t); };
  s.cycles = {cyc};
  return s;
}

}  // namespace

ScenarioSpec builtin_scenario(const std::string& name) {
  if (name == "double-well-1d") return double_well_1d();
  if (name == "asymmetric-well-1d") return asymmetric_well_1d();
  if (name == "quartic-well-1d") return quartic_well_1d();
  if (name == "harmonic-1d") return harmonic_1d();
  if (name == "gradient-well-1d") return gradient_well_1d();
  if (name == "gradient-2d") return gradient_2d();
  if (name == "annulus-cycle") return annulus_cycle();
  std::string catalog;
  for (const auto& n : builtin_scenario_names()) catalog += "\n  " + n;
  throw std::invalid_argument("unknown scenario '" + name +
                              "'; available:" + catalog);
}

std::vector<std::string> builtin_scenario_names() {
  return {"double-well-1d", "asymmetric-well-1d", "quartic-well-1d",
          "harmonic-1d",    "gradient-well-1d",   "gradient-2d",
          "annulus-cycle"};
}

namespace {

ScalarFn potential_from_ini(const IniFile& ini) {
  const std::string form = ini.get("potential.form");
  if (form == "double-well") {
    const double a = ini.get_double("potential.a", 1.0);
    const double w = ini.get_double("potential.w", 1.0);
    const double c0 = ini.get_double("potential.c0", 1.0);
    return [a, w, c0](const Pt& p) {
      const double q = p[0] * p[0] - w * w;
      return a * q * q + c0;
    };
  }
  if (form == "tilted-double-well") {
    const double a = ini.get_double("potential.a", 1.0);
    const double b = ini.get_double("potential.b", 0.25);
    const double w = ini.get_double("potential.w", 1.0);
    const double c0 = ini.get_double("potential.c0", 1.0);
    return [a, b, w, c0](const Pt& p) {
      const double q = p[0] * p[0] - w * w;
      return c0 + q * q * (a + b * p[0]);
    };
  }
  if (form == "quartic-well") {
    const double c0 = ini.get_double("potential.c0", 1.0);
    const double q2 = ini.get_double("potential.q2", 1.0);
    const double q3 = ini.get_double("potential.q3", 0.0);
    const double q4 = ini.get_double("potential.q4", 0.0);
    return [c0, q2, q3, q4](const Pt& p) {
      const double x = p[0];
      return c0 + q2 * x * x + q3 * x * x * x + q4 * x * x * x * x;
    };
  }
  if (form == "poly") {
    const std::vector<double> coef = ini.get_list("potential.coeffs");
    return [coef](const Pt& p) {
      double v = 0, xk = 1;
      for (double ck : coef) {
        v += ck * xk;
        xk *= p[0];
      }
      return v;
    };
  }
  if (form == "cos") {
    const double c0 = ini.get_double("potential.c0", 2.0);
    const double amp = ini.get_double("potential.amp", 1.0);
    const double k = ini.get_double("potential.k", 1.0);
    const double phase = ini.get_double("potential.phase", 0.0);
    return [c0, amp, k, phase](const Pt& p) {
      return c0 + amp * std::cos(k * p[0] + phase);
    };
  }
  throw std::runtime_error("scenario file: unknown potential.form '" + form + "'");
}

}  // namespace

ScenarioSpec scenario_from_ini(const IniFile& ini) {
  ScenarioSpec s;
  s.name = ini.get("name", "file-scenario");
  s.description = ini.get("description", "");

  const std::string kind = ini.get("domain.kind", "interval");
  if (kind == "interval")
    s.domain.kind = DomainKind::interval;
  else if (kind == "flat-torus")
    s.domain.kind = DomainKind::flat_torus;
  else
    throw std::runtime_error(
        "scenario file: only 1D interval / flat-torus domains are file-definable; "
        "2D scenarios ship as built-ins");
  s.domain.dim = 1;
  s.domain.bounds[0] = {ini.get_double("domain.xmin", -2),
                        ini.get_double("domain.xmax", 2)};
  s.domain.boundary[0] = s.domain.kind == DomainKind::flat_torus
                             ? BoundaryKind::periodic
                             : BoundaryKind::dirichlet_zero;

  s.c = potential_from_ini(ini);

  const std::string fk = ini.get("field.kind", "zero");
  if (fk == "gradient") {
    s.field.kind = FieldKind::gradient_of_phi;
    const std::vector<double> coef = ini.get_list("field.phi-coeffs");
    if (coef.empty())
      throw std::runtime_error("scenario file: gradient field needs field.phi-coeffs");
    s.field.phi = [coef](const Pt& p) {
      double v = 0, xk = 1;
      for (double ck : coef) {
        v += ck * xk;
        xk *= p[0];
      }
      return v;
    };
  } else if (fk != "zero") {
    throw std::runtime_error("scenario file: field.kind must be zero or gradient");
  }

  for (int i = 0;; ++i) {
    const std::string sec =
        i == 0 && !ini.has("point[0].location") ? "point" : "point[" + std::to_string(i) + "]";
    if (!ini.has(sec + ".location")) break;
    CriticalPointData p;
    p.location = pt(ini.get_double(sec + ".location", 0));
    p.value = ini.get_double(sec + ".value", 0);
    if (ini.has(sec + ".quad")) p.quad = {ini.get_double(sec + ".quad", 0)};
    if (ini.has(sec + ".cubic")) {
      p.cubic = SymTensor3(1);
      p.cubic.set_ordered(0, 0, 0, ini.get_double(sec + ".cubic", 0));
    }
    if (ini.has(sec + ".quartic")) {
      p.quartic0 = SymTensor4(1);
      p.quartic0.set_ordered(0, 0, 0, 0, ini.get_double(sec + ".quartic", 0));
    }
    if (ini.has(sec + ".hessian-phi"))
      p.hessian_phi = {ini.get_double(sec + ".hessian-phi", 0)};
    s.critical_points.push_back(p);
    if (sec == "point") break;
  }
  return s;
}

ScenarioSpec load_scenario_file(const std::string& path) {
  return scenario_from_ini(IniFile::load(path));
}

ScenarioSpec resolve_scenario(const RunConfig& cfg) {
  if (!cfg.scenario_file.empty()) return load_scenario_file(cfg.scenario_file);
  if (!cfg.scenario_name.empty()) return builtin_scenario(cfg.scenario_name);
  throw std::invalid_argument("no scenario given (use --scenario or scenario-file)");
}

int default_resolution(const ScenarioSpec& spec) {
  if (spec.domain.kind == DomainKind::annulus_polar) return 257;
  if (spec.domain.dim == 2) return 161;
  if (spec.field.kind != FieldKind::zero) return 4097;
  return 2049;
}

}  // namespace lab
