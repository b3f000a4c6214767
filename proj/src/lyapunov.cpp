#include "lab/lyapunov.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lab/numerics.hpp"

namespace lab {

namespace {

using Mat = Eigen::MatrixXcd;

Mat integrand(const Mat& D, double t) {
  const Mat E = (t * D).exp();
  return E * E.adjoint();
}

Mat simpson(const Mat& fa, const Mat& fm, const Mat& fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

void adapt(const Mat& D, double a, double b, const Mat& fa, const Mat& fm,
           const Mat& fb, const Mat& whole, double tol, int depth, Mat& acc) {
  const double m = 0.5 * (a + b);
  const Mat flm = integrand(D, 0.5 * (a + m));
  const Mat frm = integrand(D, 0.5 * (m + b));
  const Mat left = simpson(fa, flm, fm, a, m);
  const Mat right = simpson(fm, frm, fb, m, b);
  const Mat diff = left + right - whole;
  if (depth <= 0 || diff.norm() <= 15.0 * tol) {
    acc += left + right + diff / 15.0;
    return;
  }
  adapt(D, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc);
  adapt(D, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc);
}

}  // namespace

LyapunovMatrix solve_lyapunov(const Eigen::MatrixXcd& D, double mu) {
  if (D.rows() != D.cols()) throw std::invalid_argument("solve_lyapunov: square D");
  if (!(mu > 0)) throw std::invalid_argument("solve_lyapunov: mu > 0 required");

  Eigen::ComplexEigenSolver<Mat> es(D);
  double max_re = -1e300;
  for (int i = 0; i < D.rows(); ++i)
    max_re = std::max(max_re, es.eigenvalues()(i).real());
  if (max_re >= 0)
    throw std::runtime_error("solve_lyapunov: not a stable linearization");

  const double t_max = 40.0 / std::abs(max_re);
  // integrate on subintervals that follow the exponential decay
  Mat B = Mat::Zero(D.rows(), D.cols());
  const int segments = 24;
  double a = 0;
  for (int s = 0; s < segments; ++s) {
    const double b = t_max * (s + 1) / segments;
    const Mat fa = integrand(D, a);
    const Mat fb = integrand(D, b);
    const Mat fm = integrand(D, 0.5 * (a + b));
    const Mat whole = simpson(fa, fm, fb, a, b);
    adapt(D, a, b, fa, fm, fb, whole, 1e-14 * std::max(1.0, whole.norm()), 28, B);
    a = b;
  }
  B *= mu;

  LyapunovMatrix out;
  out.D = D;
  out.mu = mu;
  out.A = B.inverse();
  out.A = 0.5 * (out.A + out.A.adjoint());  // enforce exact Hermitian symmetry
  out.residual = (out.A * D + D.adjoint() * out.A + mu * out.A * out.A).norm();
  Eigen::SelfAdjointEigenSolver<Mat> sa(out.A);
  out.min_eig_A = sa.eigenvalues().minCoeff();
  return out;
}

LyapunovMatrix solve_lyapunov(const Eigen::MatrixXd& D, double mu) {
  return solve_lyapunov(Mat(D.cast<std::complex<double>>()), mu);
}

LocalLyapunov local_lyapunov_point(const VectorFn& b, const Pt& P, double mu,
                                   int dim, double validity_radius) {
  // finite-difference linearization J_ij = d b_i / d x_j
  Eigen::MatrixXd J(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      ScalarFn comp = [&b, i](const Pt& x) { return b(x)[i]; };
      J(i, j) = fd_partial(comp, P, j);
    }
  Eigen::EigenSolver<Eigen::MatrixXd> es(J);
  double max_re = -1e300, min_re = 1e300;
  for (int i = 0; i < dim; ++i) {
    max_re = std::max(max_re, es.eigenvalues()(i).real());
    min_re = std::min(min_re, es.eigenvalues()(i).real());
  }
  LocalLyapunov loc;
  loc.center = P;
  loc.dim = dim;
  loc.validity_radius = validity_radius;
  if (max_re < 0) {
    loc.repellor = false;
  } else if (min_re > 0) {
    loc.repellor = true;
  } else {
    throw std::logic_error(
        "local_lyapunov_point: saddle point; supply the stable/unstable "
        "splitting analytically");
  }
  const Eigen::MatrixXd D = loc.repellor ? Eigen::MatrixXd(-J) : J;
  const LyapunovMatrix sol = solve_lyapunov(D, mu);
  loc.A = sol.A.real();

  const Eigen::MatrixXd A = loc.A;
  const Pt center = P;
  const bool rep = loc.repellor;
  loc.L = [A, center, dim](const Pt& x) {
    Eigen::Vector2d d = Eigen::Vector2d::Zero();
    for (int k = 0; k < dim; ++k) d(k) = x[k] - center[k];
    const auto dv = d.head(dim);
    return static_cast<double>(dv.dot(A * dv));
  };
  loc.grad_L = [A, center, dim](const Pt& x) {
    Eigen::Vector2d d = Eigen::Vector2d::Zero();
    for (int k = 0; k < dim; ++k) d(k) = x[k] - center[k];
    const Eigen::VectorXd g = 2.0 * (A * d.head(dim));
    Pt out{0, 0};
    for (int k = 0; k < dim; ++k) out[k] = g(k);
    return out;
  };
  const ScalarFn Lf = loc.L;
  const VectorFn gf = loc.grad_L;
  loc.psi = [gf, b, rep, dim](const Pt& x) {
    const Pt g = gf(x);
    Pt bv = b(x);
    if (rep)
      for (int k = 0; k < dim; ++k) bv[k] = -bv[k];
    return 0.25 * (norm2(g, dim) + 2.0 * dot(g, bv, dim));
  };

  // sample the punctured ball
  double min_psi = 1e300;
  const int n_sh = 8, n_dir = dim == 1 ? 2 : 16;
  for (int s = 1; s <= n_sh; ++s) {
    const double r = validity_radius * s / n_sh;
    for (int a = 0; a < n_dir; ++a) {
      Pt x = P;
      if (dim == 1)
        x[0] += (a == 0 ? r : -r);
      else {
        const double th = 2.0 * M_PI * a / n_dir;
        x[0] += r * std::cos(th);
        x[1] += r * std::sin(th);
      }
      min_psi = std::min(min_psi, loc.psi(x));
    }
  }
  loc.min_psi_sampled = min_psi;
  return loc;
}

LocalLyapunov local_lyapunov_cycle_planar(const VectorFn& b_polar, double r0,
                                          double beta, double band, int n_r,
                                          int n_theta) {
  LocalLyapunov loc;
  loc.cycle = true;
  loc.dim = 2;
  loc.center = pt(r0, 0);
  loc.r0 = r0;
  loc.beta = beta;
  loc.validity_radius = band;

  loc.L = [beta, r0](const Pt& x) {
    const double d = x[0] - r0;
    return beta * d * d;
  };
  loc.grad_L = [beta, r0](const Pt& x) { return pt(2.0 * beta * (x[0] - r0), 0.0); };
  loc.psi = [beta, r0, b_polar](const Pt& x) {
    const double d = x[0] - r0;
    const double gl = 2.0 * beta * d;
    const Pt bv = b_polar(x);
    return 0.25 * (gl * gl + 2.0 * gl * bv[0]);
  };

  double min_psi = 1e300;
  Pt worst{0, 0};
  for (int i = 0; i < n_r; ++i) {
    const double r = r0 - band + 2.0 * band * i / (n_r - 1);
    if (r == r0) continue;
    for (int j = 0; j < n_theta; ++j) {
      const Pt x = pt(r, 2.0 * M_PI * j / n_theta);
      const double v = loc.psi(x);
      if (v < min_psi) {
        min_psi = v;
        worst = x;
      }
    }
  }
  loc.min_psi_sampled = min_psi;
  if (!(min_psi > 0)) {
    std::ostringstream os;
    os << "cycle certificate failed: psi = " << min_psi << " at (r, theta) = ("
       << worst[0] << ", " << worst[1] << "); a larger beta may certify";
    throw std::runtime_error(os.str());
  }
  return loc;
}

FieldDecomposition decompose_field(const VectorFn& b, const ScalarFn& L,
                                   const VectorFn& grad_L,
                                   const std::vector<Pt>& samples, int dim) {
  const VectorFn grad = grad_L ? grad_L : VectorFn([L, dim](const Pt& x) {
                          return fd_gradient(L, x, dim);
                        });
  FieldDecomposition out;
  out.omega = [b, grad, dim](const Pt& x) {
    const Pt bv = b(x);
    const Pt g = grad(x);
    Pt o{0, 0};
    for (int k = 0; k < dim; ++k) o[k] = bv[k] - g[k];
    return o;
  };
  out.min_psi_omega = 1e300;
  out.min_psi_full = 1e300;
  for (const Pt& x : samples) {
    const Pt g = grad(x);
    const Pt om = out.omega(x);
    const double psi_om = 0.25 * norm2(g, dim) + 0.5 * dot(g, om, dim);
    const Pt bv = b(x);
    const double psi_full = 0.25 * (norm2(g, dim) + 2.0 * dot(g, bv, dim));
    if (psi_om < out.min_psi_omega) {
      out.min_psi_omega = psi_om;
      out.argmin = x;
    }
    out.min_psi_full = std::min(out.min_psi_full, psi_full);
    if (psi_om > 1e-12)
      ++out.n_pos;
    else if (psi_om < -1e-12)
      ++out.n_neg;
    else
      ++out.n_zero;
  }
  return out;
}

namespace {

// Cash-Karp embedded pair.
struct RkStep {
  Pt x;
  double err;
};

RkStep rk45_step(const VectorFn& f, const Pt& x, double h, int dim) {
  auto axpy = [dim](const Pt& a, double s, const Pt& b) {
    Pt o = a;
    for (int k = 0; k < dim; ++k) o[k] += s * b[k];
    return o;
  };
  const Pt k1 = f(x);
  const Pt k2 = f(axpy(x, h * 0.2, k1));
  Pt t = axpy(x, h * 3.0 / 40, k1);
  t = axpy(t, h * 9.0 / 40, k2);
  const Pt k3 = f(t);
  t = axpy(x, h * 3.0 / 10, k1);
  t = axpy(t, h * -9.0 / 10, k2);
  t = axpy(t, h * 6.0 / 5, k3);
  const Pt k4 = f(t);
  t = axpy(x, h * -11.0 / 54, k1);
  t = axpy(t, h * 5.0 / 2, k2);
  t = axpy(t, h * -70.0 / 27, k3);
  t = axpy(t, h * 35.0 / 27, k4);
  const Pt k5 = f(t);
  t = axpy(x, h * 1631.0 / 55296, k1);
  t = axpy(t, h * 175.0 / 512, k2);
  t = axpy(t, h * 575.0 / 13824, k3);
  t = axpy(t, h * 44275.0 / 110592, k4);
  t = axpy(t, h * 253.0 / 4096, k5);
  const Pt k6 = f(t);

  Pt x5 = x, x4 = x;
  const double b5[6] = {37.0 / 378, 0, 250.0 / 621, 125.0 / 594, 0, 512.0 / 1771};
  const double b4[6] = {2825.0 / 27648, 0,           18575.0 / 48384,
                        13525.0 / 55296, 277.0 / 14336, 0.25};
  const Pt* ks[6] = {&k1, &k2, &k3, &k4, &k5, &k6};
  for (int s = 0; s < 6; ++s)
    for (int k = 0; k < dim; ++k) {
      x5[k] += h * b5[s] * (*ks[s])[k];
      x4[k] += h * b4[s] * (*ks[s])[k];
    }
  double err = 0;
  for (int k = 0; k < dim; ++k) err = std::max(err, std::abs(x5[k] - x4[k]));
  return {x5, err};
}

}  // namespace

DescentReport descent_check(const ScalarFn& L, const VectorFn& b,
                            const std::vector<Pt>& starts, double horizon,
                            double tol, int dim,
                            std::optional<std::pair<Pt, double>> validity) {
  DescentReport rep;
  for (const Pt& start : starts) {
    DescentTrajectory tr;
    tr.start = start;
    Pt x = start;
    double t = 0, h = horizon / 1000;
    double Lprev = L(x);
    while (t < horizon) {
      h = std::min(h, horizon - t);
      const RkStep step = rk45_step(b, x, h, dim);
      const double scale = tol * std::max(1.0, std::sqrt(norm2(x, dim)));
      if (step.err > scale && h > 1e-12 * horizon) {
        h *= std::max(0.2, 0.9 * std::pow(scale / step.err, 0.2));
        continue;
      }
      x = step.x;
      t += h;
      if (step.err > 0)
        h = std::min(h * std::min(5.0, 0.9 * std::pow(scale / step.err, 0.2)),
                     horizon / 10);
      else
        h = std::min(5 * h, horizon / 10);
      const double Lnow = L(x);
      tr.max_increment = std::max(tr.max_increment, Lnow - Lprev);
      Lprev = Lnow;
      if (validity && dist(x, validity->first, dim) > validity->second) {
        tr.escaped = true;
        break;
      }
    }
    tr.final_L = L(x);
    if (!tr.escaped) rep.max_increment = std::max(rep.max_increment, tr.max_increment);
    rep.trajectories.push_back(tr);
  }
  return rep;
}

double descent_rate(const LocalLyapunov& loc, const VectorFn& b, const Pt& x,
                    int dim) {
  const Pt g = loc.grad_L(x);
  Pt bv = b(x);
  if (loc.repellor)
    for (int k = 0; k < dim; ++k) bv[k] = -bv[k];
  return -dot(g, bv, dim);
}

}  // namespace lab
