#include "lab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lab/numerics.hpp"

namespace lab {

namespace {

int perm_count(std::array<int, 3> v) {
  std::sort(v.begin(), v.end());
  if (v[0] == v[2]) return 1;
  if (v[0] == v[1] || v[1] == v[2]) return 3;
  return 6;
}

int perm_count4(std::array<int, 4> v) {
  std::sort(v.begin(), v.end());
  int reps = 1, run = 1, denom = 1;
  const int fact[5] = {1, 1, 2, 6, 24};
  for (int i = 1; i < 4; ++i) {
    if (v[i] == v[i - 1])
      ++run;
    else {
      denom *= fact[run];
      run = 1;
    }
    reps = denom;
  }
  denom *= fact[run];
  (void)reps;
  return 24 / denom;
}

}  // namespace

void SymTensor3::set_ordered(int i, int j, int k, double coeff) {
  const double v = coeff / perm_count({i, j, k});
  std::array<int, 3> idx{i, j, k};
  std::sort(idx.begin(), idx.end());
  do {
    at(idx[0], idx[1], idx[2]) = v;
  } while (std::next_permutation(idx.begin(), idx.end()));
}

double SymTensor3::ordered(int i, int j, int k) const {
  return at(i, j, k) * perm_count({i, j, k});
}

SymTensor3 SymTensor3::symmetrized() const {
  SymTensor3 s(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k)
        s.at(i, j, k) = (at(i, j, k) + at(i, k, j) + at(j, i, k) +
                         at(j, k, i) + at(k, i, j) + at(k, j, i)) /
                        6.0;
  return s;
}

double SymTensor3::asymmetry() const {
  const SymTensor3 s = symmetrized();
  double a = 0;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k)
        a = std::max(a, std::abs(at(i, j, k) - s.at(i, j, k)));
  return a;
}

void SymTensor4::set_ordered(int i, int j, int k, int l, double coeff) {
  const double v = coeff / perm_count4({i, j, k, l});
  std::array<int, 4> idx{i, j, k, l};
  std::sort(idx.begin(), idx.end());
  do {
    at(idx[0], idx[1], idx[2], idx[3]) = v;
  } while (std::next_permutation(idx.begin(), idx.end()));
}

double SymTensor4::ordered(int i, int j, int k, int l) const {
  return at(i, j, k, l) * perm_count4({i, j, k, l});
}

SymTensor4 SymTensor4::symmetrized() const {
  SymTensor4 s(m_);
  std::array<int, 4> idx;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l) {
          idx = {i, j, k, l};
          std::sort(idx.begin(), idx.end());
          double sum = 0;
          int n = 0;
          do {
            sum += at(idx[0], idx[1], idx[2], idx[3]);
            ++n;
          } while (std::next_permutation(idx.begin(), idx.end()));
          s.at(i, j, k, l) = sum / n;
        }
  return s;
}

double SymTensor4::asymmetry() const {
  const SymTensor4 s = symmetrized();
  double a = 0;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k)
        for (int l = 0; l < m_; ++l)
          a = std::max(a, std::abs(at(i, j, k, l) - s.at(i, j, k, l)));
  return a;
}

double DomainSpec::diameter() const {
  if (kind == DomainKind::annulus_polar) return 2.0 * bounds[0][1];
  double d2 = 0;
  for (int k = 0; k < dim; ++k) d2 += extent(k) * extent(k);
  return std::sqrt(d2);
}

double DomainSpec::volume() const {
  if (kind == DomainKind::annulus_polar) {
    const double r0 = bounds[0][0], r1 = bounds[0][1];
    return 0.5 * (r1 * r1 - r0 * r0) * extent(1);
  }
  if (kind == DomainKind::radial_interval) {
    const double r0 = bounds[0][0], r1 = bounds[0][1];
    return 0.5 * (r1 * r1 - r0 * r0);
  }
  double v = 1;
  for (int k = 0; k < dim; ++k) v *= extent(k);
  return v;
}

bool DomainSpec::contains(const Pt& p) const {
  for (int k = 0; k < dim; ++k) {
    if (boundary[k] == BoundaryKind::periodic) continue;
    if (p[k] < bounds[k][0] || p[k] > bounds[k][1]) return false;
  }
  return true;
}

Pt FieldSpec::drift(const Pt& x, int dim) const {
  switch (kind) {
    case FieldKind::zero:
      return {0, 0};
    case FieldKind::gradient_of_phi:
      if (grad_phi) return grad_phi(x);
      return fd_gradient(phi, x, dim);
    case FieldKind::general:
      return b(x);
  }
  return {0, 0};
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks)
    os << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " (residual "
       << c.residual << (c.detail.empty() ? "" : ", " + c.detail) << ")\n";
  return os.str();
}

double critical_point_gradient_norm(const ScenarioSpec& spec,
                                    const CriticalPointData& p) {
  const int m = spec.domain.dim;
  Pt g{0, 0};
  switch (spec.field.kind) {
    case FieldKind::zero:
      g = fd_gradient(spec.c, p.location, m);
      break;
    case FieldKind::gradient_of_phi:
      g = fd_gradient(spec.field.phi, p.location, m);
      break;
    case FieldKind::general: {
      const Pt bv = spec.field.b(p.location);
      g = bv;
      break;
    }
  }
  return std::sqrt(norm2(g, m));
}

namespace {

void check_domain(const ScenarioSpec& spec, ValidationReport& rep) {
  const auto& d = spec.domain;
  ValidationCheck c{"domain-bounds", true, 0, ""};
  for (int k = 0; k < d.dim; ++k) {
    if (!(d.bounds[k][0] < d.bounds[k][1])) {
      c.pass = false;
      c.detail = "axis " + std::to_string(k) + " bounds not increasing";
    }
  }
  if (d.dim < 1 || d.dim > 2) {
    c.pass = false;
    c.detail = "dimension must be 1 or 2";
  }
  if (d.kind == DomainKind::annulus_polar) {
    if (d.dim != 2) {
      c.pass = false;
      c.detail = "annulus-polar is two-dimensional";
    } else if (!(d.bounds[0][0] > 0)) {
      c.pass = false;
      c.detail = "axis 0: annulus needs 0 < r_min";
    } else if (d.boundary[1] != BoundaryKind::periodic) {
      c.pass = false;
      c.detail = "axis 1: angular axis must be periodic";
    }
  }
  if (d.kind == DomainKind::flat_torus) {
    for (int k = 0; k < d.dim; ++k)
      if (d.boundary[k] != BoundaryKind::periodic) {
        c.pass = false;
        c.detail = "axis " + std::to_string(k) + ": torus must be periodic";
      }
  }
  rep.checks.push_back(c);
}

void check_positivity(const ScenarioSpec& spec, ValidationReport& rep) {
  const auto& d = spec.domain;
  const int n = 201;
  double cmin = 1e300;
  Pt where{0, 0};
  const int ny = d.dim == 2 ? n : 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < ny; ++j) {
      Pt p{d.bounds[0][0] + d.extent(0) * i / (n - 1.0), 0};
      if (d.dim == 2) p[1] = d.bounds[1][0] + d.extent(1) * j / (ny - 1.0);
      const double v = spec.c(p);
      if (v < cmin) {
        cmin = v;
        where = p;
      }
    }
  }
  ValidationCheck c{"c-strictly-positive", cmin > 0, cmin, ""};
  if (!c.pass) {
    std::ostringstream os;
    os << "c not strictly positive near (" << where[0];
    if (d.dim == 2) os << ", " << where[1];
    os << ")";
    c.detail = os.str();
  }
  rep.checks.push_back(c);
}

void check_points(const ScenarioSpec& spec, ValidationReport& rep) {
  const int m = spec.domain.dim;
  const double tol = 1e-10;
  double min_val = 1e300;
  for (const auto& p : spec.critical_points) min_val = std::min(min_val, p.value);

  int idx = 0;
  for (const auto& p : spec.critical_points) {
    const std::string tag = "point[" + std::to_string(idx++) + "]";

    if (!spec.gauge_derived) {
      const double gn = critical_point_gradient_norm(spec, p);
      ValidationCheck g{tag + "-gradient-vanishes", gn <= tol, gn, ""};
      if (!g.pass) {
        std::ostringstream os;
        os << "|grad| = " << gn << " at probe";
        g.detail = os.str();
      }
      rep.checks.push_back(g);

      const double dv = std::abs(spec.c(p.location) - p.value);
      rep.checks.push_back(
          {tag + "-declared-value", dv <= 1e-9, dv, "c(P) vs declared"});
    }

    if (spec.field.kind == FieldKind::zero && p.value <= min_val + 1e-12) {
      bool pos = !p.quad.empty();
      double worst = pos ? 1e300 : 0.0;
      for (double q : p.quad) {
        worst = std::min(worst, q);
        if (q <= 0) pos = false;
      }
      rep.checks.push_back({tag + "-morse-nondegenerate", pos, worst,
                            "quad entries at a minimum of c"});
    }

    if (!p.cubic.empty()) {
      const double a = p.cubic.asymmetry();
      rep.checks.push_back({tag + "-cubic-symmetric", a <= 1e-12, a, ""});
    }
    if (!p.quartic0.empty()) {
      const double a = p.quartic0.asymmetry();
      rep.checks.push_back({tag + "-quartic-symmetric", a <= 1e-12, a, ""});
    }
    if (!spec.curved) {
      double cr = std::abs(p.curvature_R);
      for (double v : p.curvature_Rijij) cr = std::max(cr, std::abs(v));
      for (double v : p.curvature_Ric) cr = std::max(cr, std::abs(v));
      rep.checks.push_back(
          {tag + "-flat-curvature", cr == 0.0, cr, "curvature data on a flat scenario"});
    }
  }
}

void check_gradient_field(const ScenarioSpec& spec, ValidationReport& rep) {
  if (spec.field.kind != FieldKind::gradient_of_phi || !spec.field.b) return;
  const auto& d = spec.domain;
  const int m = d.dim;
  double worst = 0;
  const int n = 17;
  const int ny = m == 2 ? n : 1;
  for (int i = 1; i + 1 < n; ++i)
    for (int j = 0; j < ny; ++j) {
      Pt p{d.bounds[0][0] + d.extent(0) * i / (n - 1.0), 0};
      if (m == 2) p[1] = d.bounds[1][0] + d.extent(1) * j / (ny - 1.0);
      const Pt g = fd_gradient(spec.field.phi, p, m);
      const Pt bv = spec.field.b(p);
      for (int k = 0; k < m; ++k) worst = std::max(worst, std::abs(g[k] - bv[k]));
    }
  rep.checks.push_back(
      {"gradient-field-consistent", worst <= 1e-8, worst, "fd grad(phi) vs b"});
}

}  // namespace

ValidationReport validate_scenario(const ScenarioSpec& spec) {
  ValidationReport rep;
  check_domain(spec, rep);
  if (!spec.c) {
    rep.checks.push_back({"potential-present", false, 0, "no handle for c"});
    return rep;
  }
  check_positivity(spec, rep);
  if (spec.field.kind == FieldKind::gradient_of_phi && !spec.field.phi)
    rep.checks.push_back({"phi-present", false, 0, "gradient field without phi"});
  if (spec.field.kind == FieldKind::general && !spec.field.b)
    rep.checks.push_back({"b-present", false, 0, "general field without b"});
  if (spec.field.kind == FieldKind::general && !spec.field.lyapunov)
    rep.checks.push_back(
        {"lyapunov-present", false, 0,
         "general field requires a Lyapunov handle for concentration claims"});
  check_points(spec, rep);
  check_gradient_field(spec, rep);
  return rep;
}

}  // namespace lab
