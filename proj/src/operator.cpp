#include "lab/operator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "lab/numerics.hpp"

namespace lab {

namespace {

struct Stencil {
  std::vector<Eigen::Triplet<double>>* trip;
  const Grid* g;
  int row_free;
  double* diag;

  // accumulate a coupling to node (i,j); boundary targets are dropped
  // (their value is zero in the eliminated system)
  void add(int i, int j, double v) {
    const GridAxis& ax = g->axis[0];
    const GridAxis& ay = g->axis[1];
    if (ax.periodic) i = (i % ax.n + ax.n) % ax.n;
    if (g->dim == 2 && ay.periodic) j = (j % ay.n + ay.n) % ay.n;
    if (i < 0 || i >= ax.n) return;
    if (g->dim == 2 && (j < 0 || j >= ay.n)) return;
    const int f = g->free_of_node[g->node_index(i, j)];
    if (f < 0) return;
    if (f == row_free)
      *diag += v;
    else
      trip->emplace_back(row_free, f, v);
  }
};

}  // namespace

OperatorMatrix assemble_operator(const ScenarioSpec& spec, const Grid& grid,
                                 double eps, AssemblyMode mode) {
  if (!(eps > 0)) throw std::invalid_argument("assemble_operator: eps must be > 0");
  OperatorMatrix op;
  op.eps = eps;
  op.mode = mode;

  const int dim = grid.dim;
  const bool polar = grid.kind == DomainKind::annulus_polar;
  const bool radial1d = grid.kind == DomainKind::radial_interval;
  const double hx = grid.axis[0].h;
  const double hy = dim == 2 ? grid.axis[1].h : 1.0;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(grid.n_free) * (2 * dim + 1));

  double peclet = 0;

  for (int f = 0; f < grid.n_free; ++f) {
    int i, j;
    grid.node_coords(grid.node_of_free[f], i, j);
    const Pt p = grid.point_of_free(f);
    double diag = spec.c(p);

    Stencil st{&trip, &grid, f, &diag};

    const double r = p[0];
    // diffusion: -eps lap. In polar coordinates
    // lap = d_rr + (1/r) d_r + (1/r^2) d_tt.
    st.add(i - 1, j, -eps / (hx * hx));
    st.add(i + 1, j, -eps / (hx * hx));
    diag += 2.0 * eps / (hx * hx);
    if (polar || radial1d) {
      const double cr = eps / (2.0 * hx * r);
      st.add(i - 1, j, cr);
      st.add(i + 1, j, -cr);
    }
    if (dim == 2) {
      const double sy = polar ? eps / (r * r) : eps;
      st.add(i, j - 1, -sy / (hy * hy));
      st.add(i, j + 1, -sy / (hy * hy));
      diag += 2.0 * sy / (hy * hy);
    }

    // drift
    if (spec.field.kind != FieldKind::zero) {
      const Pt b = spec.field.drift(p, dim);
      double beff[2] = {b[0], 0};
      if (dim == 2) beff[1] = polar ? b[1] / r : b[1];
      const double hs[2] = {hx, hy};
      for (int k = 0; k < dim; ++k) {
        const double bk = beff[k];
        if (bk == 0) continue;
        peclet = std::max(peclet, std::abs(bk) * hs[k] / (2.0 * eps));
        const int di = k == 0 ? 1 : 0;
        const int dj = k == 1 ? 1 : 0;
        if (mode == AssemblyMode::upwind) {
          if (bk > 0) {
            diag += bk / hs[k];
            st.add(i - di, j - dj, -bk / hs[k]);
          } else {
            diag += -bk / hs[k];
            st.add(i + di, j + dj, bk / hs[k]);
          }
        } else {
          st.add(i + di, j + dj, bk / (2.0 * hs[k]));
          st.add(i - di, j - dj, -bk / (2.0 * hs[k]));
        }
      }
    }
    trip.emplace_back(f, f, diag);
  }

  op.max_cell_peclet = peclet;
  op.A.resize(grid.n_free, grid.n_free);
  op.A.setFromTriplets(trip.begin(), trip.end());
  op.A.makeCompressed();
  return op;
}

bool OperatorMatrix::is_m_matrix(double* worst_offdiag) const {
  double worst = 0;
  bool ok = true;
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) {
      if (it.row() == it.col()) continue;
      worst = std::max(worst, it.value());
      if (it.value() > 1e-14) ok = false;
    }
  if (worst_offdiag) *worst_offdiag = worst;
  return ok;
}

void dump_matrix(const OperatorMatrix& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  for (int k = 0; k < op.A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op.A, k); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value() << "\n";
}

GaugeTransformed gauge_transform(const ScenarioSpec& spec, double eps) {
  if (spec.field.kind != FieldKind::gradient_of_phi)
    throw std::logic_error("gauge_transform requires a gradient-of-phi field");
  if (!(eps > 0)) throw std::invalid_argument("gauge_transform: eps must be > 0");

  const ScalarFn phi = spec.field.phi;
  const VectorFn grad = spec.field.grad_phi;
  const ScalarFn lap = spec.field.laplacian_phi;
  const ScalarFn c = spec.c;
  const int dim = spec.domain.dim;

  GaugeTransformed out;
  out.eps_original = eps;
  out.solve_eps = eps * eps;
  out.eigenvalue_scale = 1.0 / eps;

  ScenarioSpec t = spec;
  t.name = spec.name + "/gauge";
  t.gauge_derived = true;
  t.field = FieldSpec{};  // drift-free
  t.c = [phi, grad, lap, c, eps, dim](const Pt& p) {
    const Pt g = grad ? grad(p) : fd_gradient(phi, p, dim);
    const double lp = lap ? lap(p) : fd_laplacian(phi, p, dim);
    return eps * c(p) - 0.5 * eps * lp + 0.25 * norm2(g, dim);
  };

  // carry over locations and the quadratic scale of the transformed
  // potential (|grad phi|^2/4 dominates) for layer estimates
  t.critical_points.clear();
  for (const auto& p : spec.critical_points) {
    CriticalPointData q;
    q.location = p.location;
    q.value = t.c(p.location);
    for (double h : p.hessian_phi) q.quad.push_back(0.25 * h * h);
    t.critical_points.push_back(q);
  }
  out.transformed = std::move(t);
  return out;
}

std::vector<double> weighted_measure(const std::vector<double>& u_free,
                                     const ScalarFn& weight_exponent,
                                     double eps, const Grid& grid) {
  if (static_cast<int>(u_free.size()) != grid.n_free)
    throw std::invalid_argument("weighted_measure: size mismatch");
  double umax = 0;
  for (double v : u_free) umax = std::max(umax, std::abs(v));
  if (umax == 0) throw std::runtime_error("weighted_measure: u is identically zero");

  std::vector<double> logm(grid.n_free, -1e300);
  double top = -1e300;
  for (int f = 0; f < grid.n_free; ++f) {
    const double u = std::abs(u_free[f]);
    if (u == 0) continue;
    const Pt p = grid.point_of_free(f);
    const double w = weight_exponent ? weight_exponent(p) : 0.0;
    logm[f] = -w / eps + 2.0 * std::log(u) + std::log(grid.qw_free(f));
    top = std::max(top, logm[f]);
  }
  std::vector<double> mass(grid.n_free, 0.0);
  double total = 0;
  for (int f = 0; f < grid.n_free; ++f) {
    if (logm[f] <= -1e299) continue;
    mass[f] = std::exp(logm[f] - top);
    total += mass[f];
  }
  if (!(total > 0))
    throw std::runtime_error(
        "weighted_measure: weight collapsed; compute in log space with a "
        "larger eps or rescale the exponent");
  for (double& m : mass) m /= total;
  return mass;
}

}  // namespace lab
