#pragma once

#include <array>
#include <cmath>
#include <functional>

namespace lab {

// Points live in at most two dimensions; entries beyond the active
// dimension are kept at zero so handles can ignore them.
using Pt = std::array<double, 2>;

using ScalarFn = std::function<double(const Pt&)>;
using VectorFn = std::function<Pt(const Pt&)>;

inline Pt pt(double x) { return {x, 0.0}; }
inline Pt pt(double x, double y) { return {x, y}; }

inline double dist(const Pt& a, const Pt& b, int dim) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

inline double dot(const Pt& a, const Pt& b, int dim) {
  double s = 0;
  for (int k = 0; k < dim; ++k) s += a[k] * b[k];
  return s;
}

inline double norm2(const Pt& a, int dim) { return dot(a, a, dim); }

}  // namespace lab
