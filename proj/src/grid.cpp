#include "lab/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lab {

namespace {

GridAxis make_axis(double lo, double hi, int n, bool periodic) {
  GridAxis a;
  a.lo = lo;
  a.hi = hi;
  a.n = n;
  a.periodic = periodic;
  a.h = periodic ? (hi - lo) / n : (hi - lo) / (n - 1);
  a.x.resize(n);
  for (int i = 0; i < n; ++i) a.x[i] = lo + i * a.h;
  return a;
}

// Trapezoid weight along a Dirichlet axis, uniform along a periodic one.
double axis_weight(const GridAxis& a, int i) {
  if (a.periodic) return a.h;
  return (i == 0 || i == a.n - 1) ? 0.5 * a.h : a.h;
}

}  // namespace

double Grid::total_weight() const {
  double s = 0;
  for (double w : qw_node) s += w;
  return s;
}

double Grid::quad_norm(const std::vector<double>& u_free) const {
  double s = 0;
  for (int f = 0; f < n_free; ++f) s += qw_free(f) * u_free[f] * u_free[f];
  return std::sqrt(s);
}

double Grid::interpolate(const std::vector<double>& u_free, const Pt& p) const {
  // locate cell per axis; periodic axes wrap
  int base[2] = {0, 0};
  double frac[2] = {0, 0};
  for (int k = 0; k < dim; ++k) {
    const GridAxis& a = axis[k];
    double t = (p[k] - a.lo) / a.h;
    if (a.periodic) {
      const double span = a.n;
      t = std::fmod(t, span);
      if (t < 0) t += span;
    } else {
      if (t < 0 || t > a.n - 1)
        throw std::out_of_range("interpolate: point outside grid");
      if (t > a.n - 1.000001) t = a.n - 1.000001;
    }
    base[k] = static_cast<int>(std::floor(t));
    frac[k] = t - base[k];
    if (!a.periodic && base[k] >= a.n - 1) {
      base[k] = a.n - 2;
      frac[k] = 1.0;
    }
  }
  auto value_at = [&](int i, int j) {
    if (axis[0].periodic) i %= axis[0].n;
    if (dim == 2 && axis[1].periodic) j %= axis[1].n;
    const int f = free_of_node[node_index(i, j)];
    return f < 0 ? 0.0 : u_free[f];
  };
  if (dim == 1)
    return (1 - frac[0]) * value_at(base[0], 0) + frac[0] * value_at(base[0] + 1, 0);
  const double v00 = value_at(base[0], base[1]);
  const double v10 = value_at(base[0] + 1, base[1]);
  const double v01 = value_at(base[0], base[1] + 1);
  const double v11 = value_at(base[0] + 1, base[1] + 1);
  return (1 - frac[0]) * (1 - frac[1]) * v00 + frac[0] * (1 - frac[1]) * v10 +
         (1 - frac[0]) * frac[1] * v01 + frac[0] * frac[1] * v11;
}

Grid build_grid(const ScenarioSpec& spec, int resolution, int resolution_y,
                double eps_hint) {
  const DomainSpec& d = spec.domain;
  if (resolution < 16)
    throw std::invalid_argument("build_grid: need at least 16 nodes per axis");
  if (resolution_y == 0) resolution_y = resolution;
  if (d.dim == 2 && resolution_y < 16)
    throw std::invalid_argument("build_grid: need at least 16 nodes per axis");

  Grid g;
  g.kind = d.kind;
  g.dim = d.dim;
  g.axis[0] = make_axis(d.bounds[0][0], d.bounds[0][1], resolution,
                        d.boundary[0] == BoundaryKind::periodic);
  if (d.dim == 2)
    g.axis[1] = make_axis(d.bounds[1][0], d.bounds[1][1], resolution_y,
                          d.boundary[1] == BoundaryKind::periodic);
  else
    g.axis[1] = make_axis(0, 1, 1, false);

  const int nx = g.axis[0].n;
  const int ny = d.dim == 2 ? g.axis[1].n : 1;
  g.n_nodes = nx * ny;
  g.free_of_node.assign(g.n_nodes, -1);
  g.qw_node.assign(g.n_nodes, 0.0);

  const bool radial =
      d.kind == DomainKind::annulus_polar || d.kind == DomainKind::radial_interval;

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int node = g.node_index(i, j);
      double w = axis_weight(g.axis[0], i);
      if (d.dim == 2) w *= axis_weight(g.axis[1], j);
      if (radial) w *= g.axis[0].x[i];
      g.qw_node[node] = w;

      bool boundary = false;
      if (!g.axis[0].periodic && (i == 0 || i == nx - 1)) boundary = true;
      if (d.dim == 2 && !g.axis[1].periodic && (j == 0 || j == ny - 1))
        boundary = true;
      if (!boundary) {
        g.free_of_node[node] = static_cast<int>(g.node_of_free.size());
        g.node_of_free.push_back(node);
      }
    }
  }
  g.n_free = static_cast<int>(g.node_of_free.size());

  if (eps_hint > 0) {
    const double scale = spec.field.kind == FieldKind::zero ? 0.25 : 0.5;
    const double need = std::pow(eps_hint, scale) / 8.0;
    for (int k = 0; k < d.dim; ++k) {
      if (g.axis[k].h > need) {
        std::ostringstream os;
        os << "axis " << k << ": h = " << g.axis[k].h
           << " exceeds the layer rule eps^" << scale << "/8 = " << need
           << " at eps = " << eps_hint;
        g.warnings.push_back(os.str());
      }
    }
  }
  return g;
}

}  // namespace lab
