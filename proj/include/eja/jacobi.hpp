#pragma once

// Cyclic Jacobi eigensolver for small dense symmetric matrices.

#include <Eigen/Dense>

#include <cmath>

namespace eja {

struct SymmetricEigen {
  Eigen::VectorXd values;   // unsorted, column order of `vectors`
  Eigen::MatrixXd vectors;  // orthonormal columns
  int sweeps = 0;
};

/// Row-cyclic sweeps until the off-diagonal Frobenius norm drops to
/// `rel_tol * ||A||_F`. Sweep order is fixed, so results are deterministic.
inline SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& input, double rel_tol = 1e-13, int max_sweeps = 100) {
  const int n = static_cast<int>(input.rows());
  Eigen::MatrixXd a = 0.5 * (input + input.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double total = a.norm();
  SymmetricEigen out;

  auto off_norm = [&] {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  if (total > 0.0) {
    const double target = rel_tol * total;
    while (out.sweeps < max_sweeps && off_norm() > target) {
      ++out.sweeps;
      for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (apq == 0.0) continue;
          const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
          const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;
          for (int k = 0; k < n; ++k) {
            const double akp = a(k, p);
            const double akq = a(k, q);
            a(k, p) = c * akp - s * akq;
            a(k, q) = s * akp + c * akq;
          }
          for (int k = 0; k < n; ++k) {
            const double apk = a(p, k);
            const double aqk = a(q, k);
            a(p, k) = c * apk - s * aqk;
            a(q, k) = s * apk + c * aqk;
          }
          a(p, q) = a(q, p) = 0.0;
          for (int k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  out.values = a.diagonal();
  out.vectors = std::move(v);
  return out;
}

}  // namespace eja
