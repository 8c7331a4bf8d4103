#pragma once

// Spectral decomposition over Jordan frames, spectral functions and Peirce
// decompositions.

#include "eja/algebra.hpp"
#include "eja/jacobi.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace eja {

/// Eigenvalues sorted decreasing, paired with an ordered Jordan frame.
struct SpectralDecomposition {
  Vector eigenvalues;
  std::vector<Element> frame;

  Element reconstruct() const {
    Element x = Element::zero(frame.front().algebra_ptr());
    for (std::size_t i = 0; i < frame.size(); ++i) x.mutable_coords() += eigenvalues[static_cast<int>(i)] * frame[i].coords();
    return x;
  }
};

namespace detail {

struct RawEigenpair {
  double value;
  Element idempotent;
};

inline void spin_eigen(const Eigen::Ref<const Vector>& b, double& lam_plus, double& lam_minus, Vector& direction) {
  const int m = static_cast<int>(b.size()) - 1;
  const double r = b.tail(m).norm();
  lam_plus = b[0] + r;
  lam_minus = b[0] - r;
  if (r > 0.0) {
    direction = b.tail(m) / r;
  } else {
    direction = Vector::Zero(m);
    direction[0] = 1.0;
  }
}

// Eigen-pairs in factor order; within a factor in a fixed order.
inline std::vector<RawEigenpair> raw_decompose(const Element& x) {
  const Algebra& alg = x.algebra();
  std::vector<RawEigenpair> pairs;
  pairs.reserve(static_cast<std::size_t>(alg.rank()));
  for (std::size_t f = 0; f < alg.num_factors(); ++f) {
    const Factor& fac = alg.factor(f);
    const auto b = x.block(f);
    switch (fac.family) {
      case Family::Rn:
        for (int i = 0; i < fac.size; ++i) {
          Element c = Element::zero(x.algebra_ptr());
          c.block(f)[i] = 1.0;
          pairs.push_back({b[i], std::move(c)});
        }
        break;
      case Family::Spin: {
        double lp, lm;
        Vector dir;
        spin_eigen(b, lp, lm, dir);
        const int m = fac.size - 1;
        Element cp = Element::zero(x.algebra_ptr());
        Element cm = Element::zero(x.algebra_ptr());
        cp.block(f)[0] = 0.5;
        cp.block(f).tail(m) = 0.5 * dir;
        cm.block(f)[0] = 0.5;
        cm.block(f).tail(m) = -0.5 * dir;
        pairs.push_back({lp, std::move(cp)});
        pairs.push_back({lm, std::move(cm)});
        break;
      }
      case Family::Sym: {
        const SymmetricEigen eig = jacobi_eigen(svec_to_matrix(b, fac.size));
        for (int i = 0; i < fac.size; ++i) {
          const Vector q = eig.vectors.col(i);
          Element c = Element::zero(x.algebra_ptr());
          c.block(f) = matrix_to_svec(q * q.transpose());
          pairs.push_back({eig.values[i], std::move(c)});
        }
        break;
      }
    }
  }
  return pairs;
}

}  // namespace detail

/// Eigenvalue vector lambda(x), sorted decreasing.
inline Vector eigenvalues(const Element& x) {
  const Algebra& alg = x.algebra();
  Vector lam(alg.rank());
  int k = 0;
  for (std::size_t f = 0; f < alg.num_factors(); ++f) {
    const Factor& fac = alg.factor(f);
    const auto b = x.block(f);
    switch (fac.family) {
      case Family::Rn:
        for (int i = 0; i < fac.size; ++i) lam[k++] = b[i];
        break;
      case Family::Spin: {
        const double r = b.tail(fac.size - 1).norm();
        lam[k++] = b[0] + r;
        lam[k++] = b[0] - r;
        break;
      }
      case Family::Sym: {
        const SymmetricEigen eig = jacobi_eigen(svec_to_matrix(b, fac.size));
        for (int i = 0; i < fac.size; ++i) lam[k++] = eig.values[i];
        break;
      }
    }
  }
  std::sort(lam.data(), lam.data() + lam.size(), std::greater<>());
  return lam;
}

inline SpectralDecomposition spectral_decompose(const Element& x) {
  auto pairs = detail::raw_decompose(x);
  std::stable_sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
  SpectralDecomposition sd;
  sd.eigenvalues.resize(static_cast<int>(pairs.size()));
  sd.frame.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    sd.eigenvalues[static_cast<int>(i)] = pairs[i].value;
    sd.frame.push_back(std::move(pairs[i].idempotent));
  }
  return sd;
}

/// Element sum_i w_i e_i over an ordered frame.
inline Element combine(const std::vector<Element>& frame, const Vector& weights) {
  Element x = Element::zero(frame.front().algebra_ptr());
  for (std::size_t i = 0; i < frame.size(); ++i) x.mutable_coords() += weights[static_cast<int>(i)] * frame[i].coords();
  return x;
}

/// sum_i f(lambda_i) e_i. `f` may throw domain_error for eigenvalues outside
/// its domain.
inline Element apply_spectral_fn(const Element& x, const std::function<double(double)>& f) {
  const SpectralDecomposition sd = spectral_decompose(x);
  Vector w(sd.eigenvalues.size());
  for (int i = 0; i < w.size(); ++i) w[i] = f(sd.eigenvalues[i]);
  return combine(sd.frame, w);
}

inline Element abs_element(const Element& x) {
  return apply_spectral_fn(x, [](double t) { return std::abs(t); });
}

/// Square root of x >= 0; eigenvalues in [-tol * scale, 0) are treated as 0.
inline Element sqrt_element(const Element& x, double tol = kDefaultTol) {
  const double scale = std::max(1.0, eigenvalues(x).cwiseAbs().maxCoeff());
  return apply_spectral_fn(x, [&](double t) {
    if (t < -tol * scale) throw domain_error("square root of an element with eigenvalue " + std::to_string(t));
    return std::sqrt(std::max(0.0, t));
  });
}

inline Element inverse_element(const Element& x) {
  const Vector lam = eigenvalues(x);
  const double big = lam.cwiseAbs().maxCoeff();
  if (big == 0.0 || lam.cwiseAbs().minCoeff() <= 1e-14 * big) throw domain_error("element is not invertible");
  return apply_spectral_fn(x, [](double t) { return 1.0 / t; });
}

// ---------------------------------------------------------------------------
// Peirce decompositions

inline bool is_idempotent(const Element& c, double tol = kDefaultTol) {
  return trace_norm2(square(c) - c) <= tol * std::max(1.0, trace_norm2(c));
}

/// Projection of x onto V(c, gamma), gamma in {0, 1/2, 1}, evaluated as the
/// Lagrange polynomial of L_c that is 1 at gamma and 0 at the other two
/// eigenvalues of L_c.
inline Element peirce_project(const Element& c, double gamma, const Element& x, double tol = kDefaultTol) {
  c.check_same(x);
  if (!is_idempotent(c, tol)) throw domain_error("peirce_project: c is not an idempotent");
  const Element cx = jordan_product(c, x);
  const Element ccx = jordan_product(c, cx);
  if (gamma == 1.0) return 2.0 * ccx - cx;          // t(2t - 1)
  if (gamma == 0.5) return 4.0 * (cx - ccx);        // 4t(1 - t)
  if (gamma == 0.0) return 2.0 * ccx - 3.0 * cx + x;  // (2t - 1)(t - 1)
  throw domain_error("peirce_project: gamma must be 0, 1/2 or 1");
}

/// Components x_ij (i <= j) of x relative to an ordered Jordan frame.
class PeirceComponents {
 public:
  explicit PeirceComponents(int n) : n_(n), parts_(static_cast<std::size_t>(n * (n + 1) / 2)) {}

  int rank() const { return n_; }
  const Element& at(int i, int j) const { return parts_[index(i, j)]; }
  Element& at(int i, int j) { return parts_[index(i, j)]; }

  Element sum() const {
    Element s = Element::zero(parts_.front().algebra_ptr());
    for (const auto& p : parts_) s += p;
    return s;
  }

 private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(svec_index(i, j, n_));
  }
  int n_;
  std::vector<Element> parts_;
};

/// Checks idempotency, pairwise orthogonality, unit trace norm and sum = e.
inline bool is_jordan_frame(const std::vector<Element>& frame, double tol = kDefaultTol) {
  if (frame.empty()) return false;
  const AlgebraPtr& alg = frame.front().algebra_ptr();
  if (static_cast<int>(frame.size()) != alg->rank()) return false;
  Element total = Element::zero(alg);
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (!is_idempotent(frame[i], tol)) return false;
    if (std::abs(inner(frame[i], frame[i]) - 1.0) > tol) return false;
    for (std::size_t j = i + 1; j < frame.size(); ++j)
      if (std::abs(inner(frame[i], frame[j])) > tol) return false;
    total += frame[i];
  }
  return trace_norm2(total - unit(alg)) <= tol * std::sqrt(static_cast<double>(alg->rank()));
}

inline PeirceComponents frame_peirce_components(const std::vector<Element>& frame, const Element& x,
                                                double tol = kDefaultTol) {
  if (!is_jordan_frame(frame, tol)) throw domain_error("frame_peirce_components: not a Jordan frame");
  frame.front().check_same(x);
  const int n = static_cast<int>(frame.size());
  PeirceComponents pc(n);
  std::vector<Element> ex;
  ex.reserve(frame.size());
  for (const auto& c : frame) ex.push_back(jordan_product(c, x));
  for (int i = 0; i < n; ++i) {
    const auto& ci = frame[static_cast<std::size_t>(i)];
    pc.at(i, i) = 2.0 * jordan_product(ci, ex[static_cast<std::size_t>(i)]) - ex[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) pc.at(i, j) = 4.0 * jordan_product(ci, ex[static_cast<std::size_t>(j)]);
  }
  return pc;
}

}  // namespace eja
