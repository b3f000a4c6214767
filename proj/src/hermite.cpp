#include "lab/hermite.hpp"

#include <stdexcept>

namespace lab {

double hermite_poly(int n, double x) {
  double p0 = 1.0;
  if (n == 0) return p0;
  double p1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double p2 = 2.0 * x * p1 - 2.0 * k * p0;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double hermite_h(int n, double x) {
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  return sign * hermite_poly(n, x) * std::exp(-0.5 * x * x);
}

double oscillator_psi(int n, double lambda, double y) {
  const double q = std::pow(lambda, 0.25);
  const double z = q * y;
  double lognorm = 0.5 * std::log(q) - 0.25 * std::log(M_PI);
  for (int k = 1; k <= n; ++k) lognorm -= 0.5 * std::log(2.0 * k);
  // H_n grows fast; evaluate H_n * exp(-z^2/2) with the norm folded in
  return std::exp(lognorm - 0.5 * z * z) * hermite_poly(n, z);
}

OscillatorExpansion::OscillatorExpansion(int dim, std::vector<double> lambda)
    : dim_(dim), lambda_(std::move(lambda)) {
  if (dim_ < 1 || dim_ > 2) throw std::invalid_argument("dim must be 1 or 2");
  if (static_cast<int>(lambda_.size()) != dim_)
    throw std::invalid_argument("lambda size mismatch");
  for (double l : lambda_)
    if (!(l > 0)) throw std::invalid_argument("lambda entries must be positive");
}

OscillatorExpansion OscillatorExpansion::ground(int dim,
                                                std::vector<double> lambda) {
  OscillatorExpansion e(dim, std::move(lambda));
  e.add({0, 0}, 1.0);
  return e;
}

OscillatorExpansion OscillatorExpansion::multiplied_by_y(int axis) const {
  OscillatorExpansion out(dim_, lambda_);
  const double s = std::pow(4.0 * lambda_[axis], -0.25);
  for (const auto& [k, c] : coef_) {
    Key up = k;
    up[axis] += 1;
    out.add(up, c * s * std::sqrt(static_cast<double>(k[axis] + 1)));
    if (k[axis] > 0) {
      Key dn = k;
      dn[axis] -= 1;
      out.add(dn, c * s * std::sqrt(static_cast<double>(k[axis])));
    }
  }
  return out;
}

double OscillatorExpansion::norm2() const {
  double s = 0;
  for (const auto& [k, c] : coef_) s += c * c;
  return s;
}

double OscillatorExpansion::excitation(const Key& k) const {
  double s = 0;
  for (int a = 0; a < dim_; ++a) s += 2.0 * k[a] * std::sqrt(lambda_[a]);
  return s;
}

double OscillatorExpansion::evaluate(const std::array<double, 2>& y) const {
  double v = 0;
  for (const auto& [k, c] : coef_) {
    double term = c;
    for (int a = 0; a < dim_; ++a) term *= oscillator_psi(k[a], lambda_[a], y[a]);
    v += term;
  }
  return v;
}

}  // namespace lab
