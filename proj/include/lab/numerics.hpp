#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lab/point.hpp"

namespace lab {

// Fourth-order central difference of a scalar handle along axis k.
// Step 1e-5 keeps truncation below the 1e-10 probe tolerance while the
// second-order stencil would not (its h^2 term alone reaches ~4e-10 on
// the shipped quartic wells).
inline double fd_partial(const ScalarFn& f, const Pt& x, int k,
                         double h = 1e-5) {
  Pt xp2 = x, xp1 = x, xm1 = x, xm2 = x;
  xp2[k] += 2 * h;
  xp1[k] += h;
  xm1[k] -= h;
  xm2[k] -= 2 * h;
  return (f(xm2) - 8.0 * f(xm1) + 8.0 * f(xp1) - f(xp2)) / (12.0 * h);
}

inline Pt fd_gradient(const ScalarFn& f, const Pt& x, int dim,
                      double h = 1e-5) {
  Pt g{0, 0};
  for (int k = 0; k < dim; ++k) g[k] = fd_partial(f, x, k, h);
  return g;
}

// Fourth-order second derivative along axis k.
inline double fd_second(const ScalarFn& f, const Pt& x, int k,
                        double h = 1e-4) {
  Pt xp2 = x, xp1 = x, xm1 = x, xm2 = x;
  xp2[k] += 2 * h;
  xp1[k] += h;
  xm1[k] -= h;
  xm2[k] -= 2 * h;
  return (-f(xm2) + 16.0 * f(xm1) - 30.0 * f(x) + 16.0 * f(xp1) - f(xp2)) /
         (12.0 * h * h);
}

inline double fd_laplacian(const ScalarFn& f, const Pt& x, int dim,
                           double h = 1e-4) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s += fd_second(f, x, k, h);
  return s;
}

// Adaptive Simpson quadrature for a scalar integrand.
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b, double tol = 1e-12,
                                 int max_depth = 40) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = detail::simpson(f, a, b, fa, fm, fb);
  return detail::adapt(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Composite trapezoid over a periodic integrand; spectrally accurate
// for smooth periodic data.
inline double integrate_periodic(const std::function<double(double)>& f,
                                 double a, double b, int n = 2048) {
  double s = 0;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) s += f(a + i * h);
  return s * h;
}

// Least squares fit of y against columns phi_j(x); returns coefficients,
// rms residual and the design-matrix condition number.
struct LsqFit {
  std::vector<double> coef;
  double rms_residual = 0;
  double condition = 0;
};

LsqFit lsq_fit(const std::vector<double>& x, const std::vector<double>& y,
               const std::vector<std::function<double(double)>>& basis);

// Slope of y vs x by simple linear regression.
inline double fit_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  if (x.size() < 2 || x.size() != y.size())
    throw std::invalid_argument("fit_slope: need >= 2 matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace lab
