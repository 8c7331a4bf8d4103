#pragma once

// Linear transformations on an algebra: Lyapunov maps, quadratic
// representations, Schur-product maps, matrix-induced maps on sym:k, and
// randomized positivity / Z-property falsifiers.

#include "eja/algebra.hpp"
#include "eja/random.hpp"
#include "eja/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eja {

struct singular_error : std::domain_error {
  using std::domain_error::domain_error;
};

enum class MapKind { Lyapunov, QuadRep, QuadRepPair, Schur, Congruence, MatrixLyapunov, Positive, Generic };

inline const char* to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Lyapunov: return "lyapunov";
    case MapKind::QuadRep: return "quadrep";
    case MapKind::QuadRepPair: return "quadrep_pair";
    case MapKind::Schur: return "schur";
    case MapKind::Congruence: return "congruence";
    case MapKind::MatrixLyapunov: return "matrix_lyapunov";
    case MapKind::Positive: return "positive";
    case MapKind::Generic: return "generic";
  }
  return "generic";
}

/// Symbolic origin of a map. `Positive` marks a map the caller knows to be
/// positive (nonnegative matrices on rn, inverses of positive stable Z-maps).
struct MapTag {
  MapKind kind = MapKind::Generic;
  std::optional<Element> a;
  std::optional<Element> b;
  Matrix matrix;
  std::vector<Element> frame;
};

/// Linear map stored as its matrix in a trace-orthonormal basis, so the
/// adjoint is the transpose.
class LinearMap {
 public:
  LinearMap(AlgebraPtr algebra, Matrix coeffs, MapTag tag = {})
      : algebra_(std::move(algebra)), coeffs_(std::move(coeffs)), tag_(std::move(tag)) {
    if (coeffs_.rows() != algebra_->dim() || coeffs_.cols() != algebra_->dim())
      throw mismatch_error("coefficient matrix does not match dim of " + algebra_->spec());
  }

  template <class F>
  static LinearMap from_function(const AlgebraPtr& algebra, F&& fn, MapTag tag = {}) {
    const int d = algebra->dim();
    Matrix coeffs(d, d);
    for (int k = 0; k < d; ++k) {
      const Element basis = from_orthonormal(algebra, Vector::Unit(d, k));
      coeffs.col(k) = to_orthonormal(fn(basis));
    }
    return LinearMap(algebra, std::move(coeffs), std::move(tag));
  }

  static LinearMap identity(const AlgebraPtr& algebra) {
    return LinearMap(algebra, Matrix::Identity(algebra->dim(), algebra->dim()));
  }

  const Algebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const Matrix& coeffs() const { return coeffs_; }
  const MapTag& tag() const { return tag_; }
  MapKind kind() const { return tag_.kind; }

  Element apply(const Element& x) const {
    if (!(x.algebra() == *algebra_)) throw mismatch_error("map and element live in different algebras");
    return from_orthonormal(algebra_, coeffs_ * to_orthonormal(x));
  }
  Element operator()(const Element& x) const { return apply(x); }

  LinearMap with_tag(MapTag tag) const { return LinearMap(algebra_, coeffs_, std::move(tag)); }

  friend LinearMap operator*(const LinearMap& a, const LinearMap& b) {
    a.check_same(b);
    return LinearMap(a.algebra_, a.coeffs_ * b.coeffs_);
  }
  friend LinearMap operator+(const LinearMap& a, const LinearMap& b) {
    a.check_same(b);
    return LinearMap(a.algebra_, a.coeffs_ + b.coeffs_);
  }
  friend LinearMap operator-(const LinearMap& a, const LinearMap& b) {
    a.check_same(b);
    return LinearMap(a.algebra_, a.coeffs_ - b.coeffs_);
  }
  friend LinearMap operator*(double s, const LinearMap& a) { return LinearMap(a.algebra_, s * a.coeffs_); }

 private:
  void check_same(const LinearMap& o) const {
    if (!(*algebra_ == *o.algebra_)) throw mismatch_error("maps on different algebras");
  }

  AlgebraPtr algebra_;
  Matrix coeffs_;
  MapTag tag_;
};

// ---------------------------------------------------------------------------
// constructors

inline LinearMap lyapunov_of(const Element& a) {
  MapTag tag{MapKind::Lyapunov, a, std::nullopt, {}, {}};
  return LinearMap::from_function(a.algebra_ptr(), [&](const Element& x) { return jordan_product(a, x); },
                                  std::move(tag));
}

/// P_a = 2 L_a^2 - L_{a^2}.
inline LinearMap quad_rep(const Element& a) {
  const Element a2 = square(a);
  MapTag tag{MapKind::QuadRep, a, std::nullopt, {}, {}};
  return LinearMap::from_function(
      a.algebra_ptr(),
      [&](const Element& x) { return 2.0 * jordan_product(a, jordan_product(a, x)) - jordan_product(a2, x); },
      std::move(tag));
}

/// P_{a,b} = L_a L_b + L_b L_a - L_{a o b}.
inline LinearMap quad_rep_pair(const Element& a, const Element& b) {
  a.check_same(b);
  const Element ab = jordan_product(a, b);
  MapTag tag{MapKind::QuadRepPair, a, b, {}, {}};
  return LinearMap::from_function(
      a.algebra_ptr(),
      [&](const Element& x) {
        return jordan_product(a, jordan_product(b, x)) + jordan_product(b, jordan_product(a, x)) -
               jordan_product(ab, x);
      },
      std::move(tag));
}

/// x -> sum_{i<=j} A_ij x_ij over the Peirce decomposition of `frame`.
inline LinearMap schur_map(const Matrix& A, const std::vector<Element>& frame) {
  if (frame.empty()) throw domain_error("schur_map: empty frame");
  const int n = static_cast<int>(frame.size());
  if (A.rows() != n || A.cols() != n) throw mismatch_error("schur_map: matrix size must equal the rank");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, A.cwiseAbs().maxCoeff()))
    throw domain_error("schur_map: matrix is not symmetric");
  if (!is_jordan_frame(frame)) throw domain_error("schur_map: not a Jordan frame");
  MapTag tag{MapKind::Schur, std::nullopt, std::nullopt, A, frame};
  return LinearMap::from_function(
      frame.front().algebra_ptr(),
      [&](const Element& x) {
        const PeirceComponents pc = frame_peirce_components(frame, x);
        Element out = Element::zero(x.algebra_ptr());
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) out += A(i, j) * pc.at(i, j);
        return out;
      },
      std::move(tag));
}

namespace detail {
inline int single_sym_size(const AlgebraPtr& algebra) {
  if (algebra->num_factors() != 1 || algebra->factor(0).family != Family::Sym)
    throw mismatch_error("matrix-induced maps live on sym:k, got " + algebra->spec());
  return algebra->factor(0).size;
}
}  // namespace detail

/// X -> M X M^T on sym:k.
inline LinearMap congruence_map(const AlgebraPtr& algebra, const Matrix& M) {
  const int k = detail::single_sym_size(algebra);
  if (M.rows() != k || M.cols() != k) throw mismatch_error("congruence_map: matrix size does not match");
  MapTag tag{MapKind::Congruence, std::nullopt, std::nullopt, M, {}};
  return LinearMap::from_function(
      algebra, [&](const Element& x) { return sym_element(algebra, M * to_matrix(x) * M.transpose()); },
      std::move(tag));
}

inline LinearMap congruence_map(const Matrix& M) {
  return congruence_map(make_algebra({{Family::Sym, static_cast<int>(M.rows())}}), M);
}

/// X -> M X + X M^T on sym:k.
inline LinearMap matrix_lyapunov_map(const AlgebraPtr& algebra, const Matrix& M) {
  const int k = detail::single_sym_size(algebra);
  if (M.rows() != k || M.cols() != k) throw mismatch_error("matrix_lyapunov_map: matrix size does not match");
  MapTag tag{MapKind::MatrixLyapunov, std::nullopt, std::nullopt, M, {}};
  return LinearMap::from_function(
      algebra,
      [&](const Element& x) {
        const Matrix X = to_matrix(x);
        const Matrix MX = M * X;
        return sym_element(algebra, MX + MX.transpose());
      },
      std::move(tag));
}

inline LinearMap matrix_lyapunov_map(const Matrix& M) {
  return matrix_lyapunov_map(make_algebra({{Family::Sym, static_cast<int>(M.rows())}}), M);
}

inline LinearMap adjoint(const LinearMap& T) {
  MapTag tag = T.tag();
  switch (tag.kind) {
    case MapKind::Congruence:
    case MapKind::MatrixLyapunov:
      tag.matrix.transposeInPlace();
      break;
    default:
      break;
  }
  return LinearMap(T.algebra_ptr(), T.coeffs().transpose(), std::move(tag));
}

/// Dense inverse; maps with condition number above 1e12 are singular.
inline LinearMap invert(const LinearMap& T, double max_condition = 1e12) {
  const Eigen::JacobiSVD<Matrix> svd(T.coeffs());
  const Vector& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  const double smin = sv.size() ? sv[sv.size() - 1] : 0.0;
  if (smin <= 0.0 || smax / smin > max_condition) throw singular_error("invert: map is singular or ill-conditioned");
  const Eigen::FullPivLU<Matrix> lu(T.coeffs());
  return LinearMap(T.algebra_ptr(), lu.inverse());
}

// ---------------------------------------------------------------------------
// randomized checks

struct CheckOutcome {
  bool pass = true;
  std::optional<Element> counterexample;
  std::optional<Element> partner;  // second input for pair-based checks
  double worst = 0.0;              // most negative normalized slack seen
};

/// Falsifier for x >= 0 => T(x) >= 0. Probes e, coordinate idempotents of rn
/// factors, random primitive idempotents (the extreme rays of the cone) and
/// random PSD elements.
inline CheckOutcome is_positive(const LinearMap& T, int trials, std::uint64_t seed, double tol = kDefaultTol) {
  if (trials < 1) throw std::invalid_argument("is_positive: trials must be >= 1");
  const AlgebraPtr& alg = T.algebra_ptr();
  CheckOutcome out;
  auto probe = [&](const Element& x) {
    const Element y = T(x);
    const double scale = trace_norm2(y);
    if (scale == 0.0) return;
    const double lmin = eigenvalues(y).minCoeff();
    const double slack = lmin / scale;
    if (slack < out.worst) out.worst = slack;
    if (lmin < -tol * scale && out.pass) {
      out.pass = false;
      out.counterexample = x;
    }
  };
  probe(unit(alg));
  for (std::size_t f = 0; f < alg->num_factors(); ++f) {
    if (alg->factor(f).family != Family::Rn) continue;
    for (int i = 0; i < alg->factor(f).size; ++i) {
      Element c = Element::zero(alg);
      c.block(f)[i] = 1.0;
      probe(c);
    }
  }
  Rng rng = Rng::keyed(seed, "is_positive", alg->spec(), 0);
  for (int t = 0; t < trials; ++t) {
    probe(random_primitive(alg, rng));
    probe(random_element(alg, rng, Distribution::Psd));
  }
  return out;
}

/// Positive with P(e) = e = P*(e).
inline bool is_doubly_stochastic(const LinearMap& P, double tol = 1e-8, int trials = 256, std::uint64_t seed = 0) {
  const Element e = unit(P.algebra_ptr());
  if (trace_norm2(P(e) - e) > tol) return false;
  if (trace_norm2(adjoint(P)(e) - e) > tol) return false;
  return is_positive(P, trials, seed, tol).pass;
}

/// Falsifier for x, y >= 0, <x,y> = 0 => <L(x), y> <= 0, sampling x and y on
/// complementary sub-frames of random Jordan frames.
inline CheckOutcome z_property_check(const LinearMap& L, int trials, std::uint64_t seed, double tol = kDefaultTol) {
  if (trials < 1) throw std::invalid_argument("z_property_check: trials must be >= 1");
  const AlgebraPtr& alg = L.algebra_ptr();
  const int n = alg->rank();
  CheckOutcome out;
  if (n < 2) return out;
  Rng rng = Rng::keyed(seed, "z_property", alg->spec(), 0);
  for (int t = 0; t < trials; ++t) {
    const std::vector<Element> frame = random_frame(alg, rng);
    // even trials: single idempotent pairs; odd trials: random split
    std::vector<int> side(static_cast<std::size_t>(n), -1);
    if (t % 2 == 0) {
      const int i = rng.uniform_int(0, n - 1);
      int j = rng.uniform_int(0, n - 2);
      if (j >= i) ++j;
      side[static_cast<std::size_t>(i)] = 0;
      side[static_cast<std::size_t>(j)] = 1;
    } else {
      const int pivot = rng.uniform_int(0, n - 1);
      for (int i = 0; i < n; ++i) side[static_cast<std::size_t>(i)] = rng.uniform_int(0, 1);
      side[static_cast<std::size_t>(pivot)] = 0;
      side[static_cast<std::size_t>((pivot + 1) % n)] = 1;
    }
    Element x = Element::zero(alg);
    Element y = Element::zero(alg);
    for (int i = 0; i < n; ++i) {
      const int s = side[static_cast<std::size_t>(i)];
      if (s == 0) x += rng.uniform(0.1, 1.0) * frame[static_cast<std::size_t>(i)];
      if (s == 1) y += rng.uniform(0.1, 1.0) * frame[static_cast<std::size_t>(i)];
    }
    const Element lx = L(x);
    const double value = inner(lx, y);
    const double scale = std::max(trace_norm2(lx) * trace_norm2(y), 1e-300);
    const double slack = -value / scale;
    if (slack < out.worst) out.worst = slack;
    if (value > tol * scale && out.pass) {
      out.pass = false;
      out.counterexample = x;
      out.partner = y;
    }
  }
  return out;
}

/// A_ij = 2 a_i a_j / (a_i^2 + a_j^2) over the decreasing eigenvalues of a.
inline Matrix appendix_gram(const Element& a) {
  const Vector lam = eigenvalues(a);
  const double big = lam.cwiseAbs().maxCoeff();
  if (big == 0.0 || lam.cwiseAbs().minCoeff() <= 1e-14 * big) throw domain_error("appendix_gram: a is not invertible");
  const int n = static_cast<int>(lam.size());
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = 2.0 * lam[i] * lam[j] / (lam[i] * lam[i] + lam[j] * lam[j]);
  return A;
}

}  // namespace eja
