#pragma once

// Spectral p-norms, majorization, strong operator commutativity and the
// Hoelder / Fan-Theobald inequalities with their equality conditions.

#include "eja/algebra.hpp"
#include "eja/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace eja {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kScaleFloor = 1e-12;

inline bool is_inf(double p) { return p == kInf; }

inline void check_exponent(double p) {
  if (!(p >= 1.0)) throw domain_error("exponent must lie in [1, inf], got " + std::to_string(p));
}

/// Conjugate exponent with 1' = inf and inf' = 1.
inline double conjugate(double p) {
  check_exponent(p);
  if (p == 1.0) return kInf;
  if (is_inf(p)) return 1.0;
  return p / (p - 1.0);
}

/// Exponents r, s and their conjugates.
struct NormQuery {
  double r;
  double s;
  double r_conj;
  double s_conj;

  NormQuery(double r_, double s_) : r(r_), s(s_), r_conj(conjugate(r_)), s_conj(conjugate(s_)) {}
};

inline double vector_p_norm(const Vector& v, double p) {
  check_exponent(p);
  if (v.size() == 0) return 0.0;
  if (is_inf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 1.0) return v.cwiseAbs().sum();
  if (p == 2.0) return v.norm();
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += std::pow(std::abs(v[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

/// ||x||_p = ||lambda(x)||_p.
inline double p_norm(const Element& x, double p) { return vector_p_norm(eigenvalues(x), p); }

/// Allowed slack for comparing two magnitudes: tol relative to the larger,
/// never below kScaleFloor.
inline double gap_scale(double a, double b) { return std::max({std::abs(a), std::abs(b), kScaleFloor}); }

// ---------------------------------------------------------------------------
// majorization on R^n

inline Vector sorted_decreasing(Vector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

/// min_k (S_k(v) - S_k(u)) over decreasing partial sums, combined with
/// -|S_n(v) - S_n(u)|, relative to max(||u||_1, ||v||_1, floor). Nonnegative
/// iff u is majorized by v.
inline double majorization_slack(const Vector& v, const Vector& u) {
  if (v.size() != u.size()) throw mismatch_error("majorization: length mismatch");
  const Vector vs = sorted_decreasing(v);
  const Vector us = sorted_decreasing(u);
  const double scale = std::max({v.cwiseAbs().sum(), u.cwiseAbs().sum(), kScaleFloor});
  double sv = 0.0, su = 0.0, slack = kInf;
  for (int k = 0; k < vs.size(); ++k) {
    sv += vs[k];
    su += us[k];
    if (k + 1 < vs.size()) slack = std::min(slack, sv - su);
  }
  slack = std::min(slack, -std::abs(sv - su));
  return slack / scale;
}

/// True iff u is majorized by v.
inline bool majorizes(const Vector& v, const Vector& u, double tol = kDefaultTol) {
  return majorization_slack(v, u) >= -tol;
}

inline std::vector<int> decreasing_order(const Vector& v) {
  std::vector<int> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
  return idx;
}

/// Doubly stochastic A with u = A v, assembled from T-transforms (each a
/// convex combination of the identity and one transposition).
inline Matrix ds_witness(const Vector& v, const Vector& u, double tol = kDefaultTol) {
  if (!majorizes(v, u, tol)) throw domain_error("ds_witness: u is not majorized by v");
  const int n = static_cast<int>(v.size());
  const std::vector<int> pv = decreasing_order(v);
  const std::vector<int> pu = decreasing_order(u);
  Vector w(n), target(n);
  for (int i = 0; i < n; ++i) {
    w[i] = v[pv[static_cast<std::size_t>(i)]];
    target[i] = u[pu[static_cast<std::size_t>(i)]];
  }
  Matrix D = Matrix::Identity(n, n);
  const double eps = 1e-15 * std::max({w.cwiseAbs().sum(), target.cwiseAbs().sum(), kScaleFloor});
  for (int step = 0; step < 4 * n; ++step) {
    int j = -1;
    for (int i = 0; i < n; ++i)
      if (w[i] - target[i] > eps) { j = i; break; }
    if (j < 0) break;
    int k = -1;
    for (int i = j + 1; i < n; ++i)
      if (target[i] - w[i] > eps) { k = i; break; }
    if (k < 0) break;
    const double delta = std::min(w[j] - target[j], target[k] - w[k]);
    const double spread = w[j] - w[k];
    const double lambda = 1.0 - delta / spread;
    // rows j and k of T are (lambda, 1-lambda) and (1-lambda, lambda)
    const Eigen::RowVectorXd rj = D.row(j);
    const Eigen::RowVectorXd rk = D.row(k);
    D.row(j) = lambda * rj + (1.0 - lambda) * rk;
    D.row(k) = (1.0 - lambda) * rj + lambda * rk;
    const double wj = w[j], wk = w[k];
    w[j] = lambda * wj + (1.0 - lambda) * wk;
    w[k] = (1.0 - lambda) * wj + lambda * wk;
  }
  Matrix A = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(pu[static_cast<std::size_t>(i)], pv[static_cast<std::size_t>(j)]) = D(i, j);
  return A;
}

inline bool is_doubly_stochastic_matrix(const Matrix& A, double tol = 1e-10) {
  if (A.rows() != A.cols()) return false;
  if (A.minCoeff() < -tol) return false;
  const Vector ones = Vector::Ones(A.rows());
  return (A * ones - ones).cwiseAbs().maxCoeff() <= tol && (A.transpose() * ones - ones).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------------------
// trace inequalities

/// <lambda(x), lambda(y)> - <x, y>; never negative up to rounding.
inline double fan_theobald_gap(const Element& x, const Element& y) {
  x.check_same(y);
  return eigenvalues(x).dot(eigenvalues(y)) - inner(x, y);
}

/// Decided by the equality case of the Fan-Theobald inequality: x and y
/// share an ordered frame iff <x,y> = <lambda(x), lambda(y)>.
inline bool strongly_commute(const Element& x, const Element& y, double tol = kDefaultTol) {
  const double scale = std::max(trace_norm2(x) * trace_norm2(y), kScaleFloor);
  return fan_theobald_gap(x, y) <= tol * scale;
}

/// sum_i sgn(z_i) e_i with sgn(0) = +1.
inline Element epsilon_element(const Element& z) {
  return apply_spectral_fn(z, [](double t) { return t >= 0.0 ? 1.0 : -1.0; });
}

/// Element u attaining sup_y ||x o y||_1 / ||y||_q = ||x||_p.
inline Element dual_witness(const Element& x, double p) {
  check_exponent(p);
  const SpectralDecomposition sd = spectral_decompose(x);
  const Vector& lam = sd.eigenvalues;
  if (lam.cwiseAbs().maxCoeff() == 0.0) throw domain_error("dual_witness: x = 0");
  if (is_inf(p)) {
    int best = 0;
    for (int i = 1; i < lam.size(); ++i)
      if (std::abs(lam[i]) > std::abs(lam[best])) best = i;
    return sd.frame[static_cast<std::size_t>(best)];
  }
  Vector w(lam.size());
  for (int i = 0; i < lam.size(); ++i) {
    const double sgn = lam[i] > 0.0 ? 1.0 : (lam[i] < 0.0 ? -1.0 : 0.0);
    w[i] = p == 1.0 ? sgn : sgn * std::pow(std::abs(lam[i]), p - 1.0);
  }
  return combine(sd.frame, w);
}

struct EqualityDiagnosis {
  bool holds = false;            // ||x o y||_1 = ||x||_p ||y||_q within tolerance
  int eta = 0;                   // sign of <x,y>; 0 when |<x,y>| is below tolerance
  bool strong_commute = false;   // x and y o eps strongly operator commute
  bool scalar_equality = false;  // <lambda(x), lambda(y o eps)> = ||x||_p ||y||_q
  double gap = 0.0;              // rhs - lhs
};

struct HolderResult {
  double lhs = 0.0;  // ||x o y||_1
  double mid = 0.0;  // |<x, y>|
  double rhs = 0.0;  // ||x||_p ||y||_q
  EqualityDiagnosis diagnosis;

  /// Relative slacks of |<x,y>| <= ||x o y||_1 and ||x o y||_1 <= rhs.
  double mid_slack() const { return (lhs - mid) / gap_scale(lhs, mid); }
  double upper_slack() const { return (rhs - lhs) / gap_scale(lhs, rhs); }
};

inline HolderResult verify_holder(const Element& x, const Element& y, double p, double tol = kDefaultTol) {
  x.check_same(y);
  const double q = conjugate(p);
  HolderResult r;
  const Element z = jordan_product(x, y);
  const Vector lx = eigenvalues(x);
  const Vector ly = eigenvalues(y);
  const double nx = vector_p_norm(lx, p);
  const double ny = vector_p_norm(ly, q);
  const double xy = inner(x, y);
  r.lhs = p_norm(z, 1.0);
  r.mid = std::abs(xy);
  r.rhs = nx * ny;

  EqualityDiagnosis& d = r.diagnosis;
  const double scale = gap_scale(r.lhs, r.rhs);
  d.gap = r.rhs - r.lhs;
  d.holds = std::abs(d.gap) <= tol * scale;
  d.eta = std::abs(xy) <= tol * scale ? 0 : (xy > 0.0 ? 1 : -1);
  const Element y_eps = jordan_product(y, epsilon_element(z));
  d.strong_commute = strongly_commute(x, y_eps, tol);
  d.scalar_equality = std::abs(lx.dot(eigenvalues(y_eps)) - r.rhs) <= tol * scale;
  return r;
}

}  // namespace eja
