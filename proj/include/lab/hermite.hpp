#pragma once

#include <array>
#include <cmath>
#include <map>
#include <vector>

namespace lab {

// Physicists' Hermite polynomial H_n.
double hermite_poly(int n, double x);

// h_n(x) = exp(x^2/2) d^n/dx^n exp(-x^2) = (-1)^n H_n(x) exp(-x^2/2).
double hermite_h(int n, double x);

// Normalized eigenfunction of -d^2/dy^2 + lambda y^2 for eigenvalue
// (2n+1) sqrt(lambda).
double oscillator_psi(int n, double lambda, double y);

// Expansion over products of normalized oscillator states, keyed by the
// per-axis level. Supports multiplication by a coordinate via the ladder
// recursion y |n> = s (sqrt(n+1) |n+1> + sqrt(n) |n-1>), s = (4 lambda)^(-1/4).
class OscillatorExpansion {
 public:
  using Key = std::array<int, 2>;

  OscillatorExpansion() : OscillatorExpansion(1, {1.0}) {}
  OscillatorExpansion(int dim, std::vector<double> lambda);

  static OscillatorExpansion ground(int dim, std::vector<double> lambda);

  void add(const Key& k, double c) { coef_[k] += c; }
  const std::map<Key, double>& coef() const { return coef_; }
  int dim() const { return dim_; }
  const std::vector<double>& lambda() const { return lambda_; }

  OscillatorExpansion multiplied_by_y(int axis) const;
  double norm2() const;
  // sum over axes of (2 n_k) sqrt(lambda_k): eigenvalue of the shifted
  // oscillator sum relative to the ground level
  double excitation(const Key& k) const;
  double evaluate(const std::array<double, 2>& y) const;

 private:
  int dim_;
  std::vector<double> lambda_;
  std::map<Key, double> coef_;
};

}  // namespace lab
