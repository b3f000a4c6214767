#include "lab/numerics.hpp"

#include <Eigen/Dense>

namespace lab {

LsqFit lsq_fit(const std::vector<double>& x, const std::vector<double>& y,
               const std::vector<std::function<double(double)>>& basis) {
  const int n = static_cast<int>(x.size());
  const int k = static_cast<int>(basis.size());
  if (n < k || static_cast<int>(y.size()) != n)
    throw std::invalid_argument("lsq_fit: need at least as many points as basis functions");
  Eigen::MatrixXd A(n, k);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    b(i) = y[i];
    for (int j = 0; j < k; ++j) A(i, j) = basis[j](x[i]);
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd r = A * c - b;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  LsqFit out;
  out.coef.assign(c.data(), c.data() + k);
  out.rms_residual = std::sqrt(r.squaredNorm() / n);
  out.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : 1e300;
  return out;
}

}  // namespace lab
