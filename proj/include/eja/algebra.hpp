#pragma once

// Euclidean Jordan algebras built as products of R^k, spin factors and
// real symmetric matrices, with coordinates, Jordan product and the trace
// inner product.
//
// Coordinate layout, per factor:
//   rn:k    k entries, the usual componentwise algebra.
//   spin:k  (x0, xbar) with xbar in R^{k-1}.
//   sym:k   upper triangle of X in row-major order (i <= j); diagonal cells
//           hold X_ii, off-diagonal cells hold sqrt(2) * X_ij so that the
//           coordinates are orthonormal for <X,Y> = tr(XY).

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eja {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct parse_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct mismatch_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kDefaultTol = 1e-9;
inline const double kSqrt2 = std::sqrt(2.0);

enum class Family { Rn, Spin, Sym };

struct Factor {
  Family family;
  int size;

  int rank() const {
    switch (family) {
      case Family::Rn: return size;
      case Family::Spin: return 2;
      case Family::Sym: return size;
    }
    return 0;
  }

  int dim() const {
    switch (family) {
      case Family::Rn: return size;
      case Family::Spin: return size;
      case Family::Sym: return size * (size + 1) / 2;
    }
    return 0;
  }

  std::string to_string() const {
    switch (family) {
      case Family::Rn: return "rn:" + std::to_string(size);
      case Family::Spin: return "spin:" + std::to_string(size);
      case Family::Sym: return "sym:" + std::to_string(size);
    }
    return {};
  }

  bool operator==(const Factor&) const = default;
};

/// Descriptor of a product algebra. Factor offsets index both the coordinate
/// vector (`coord_offset`) and the eigenvalue vector (`rank_offset`).
class Algebra {
 public:
  explicit Algebra(std::vector<Factor> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw parse_error("algebra needs at least one factor");
    for (const auto& f : factors_) {
      if (f.size < 1) throw domain_error("factor size must be positive: " + f.to_string());
      if (f.family == Family::Spin && f.size < 2)
        throw domain_error("spin factor needs size >= 2: " + f.to_string());
      coord_offset_.push_back(dim_);
      rank_offset_.push_back(rank_);
      dim_ += f.dim();
      rank_ += f.rank();
    }
  }

  const std::vector<Factor>& factors() const { return factors_; }
  std::size_t num_factors() const { return factors_.size(); }
  const Factor& factor(std::size_t i) const { return factors_[i]; }
  int coord_offset(std::size_t i) const { return coord_offset_[i]; }
  int rank_offset(std::size_t i) const { return rank_offset_[i]; }

  int rank() const { return rank_; }
  int dim() const { return dim_; }

  std::string spec() const {
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) out += '+';
      out += factors_[i].to_string();
    }
    return out;
  }

  bool operator==(const Algebra& other) const { return factors_ == other.factors_; }

 private:
  std::vector<Factor> factors_;
  std::vector<int> coord_offset_;
  std::vector<int> rank_offset_;
  int rank_ = 0;
  int dim_ = 0;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

namespace detail {

inline int parse_positive(std::string_view digits, std::string_view whole) {
  if (digits.empty() || digits.size() > 6) throw parse_error("bad factor size in '" + std::string(whole) + "'");
  int value = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') throw parse_error("bad factor size in '" + std::string(whole) + "'");
    value = value * 10 + (ch - '0');
  }
  return value;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parses `factor ("+" factor)*` with factor one of `rn:<k>`, `spin:<k>`,
/// `sym:<k>`.
inline AlgebraPtr parse_algebra(std::string_view spec) {
  std::vector<Factor> factors;
  std::size_t start = 0;
  while (true) {
    const std::size_t plus = spec.find('+', start);
    const std::string_view token =
        detail::trim(spec.substr(start, plus == std::string_view::npos ? spec.npos : plus - start));
    const std::size_t colon = token.find(':');
    if (colon == std::string_view::npos) throw parse_error("expected <family>:<size>, got '" + std::string(token) + "'");
    const std::string_view name = token.substr(0, colon);
    const int size = detail::parse_positive(token.substr(colon + 1), token);
    Family family;
    if (name == "rn") family = Family::Rn;
    else if (name == "spin") family = Family::Spin;
    else if (name == "sym") family = Family::Sym;
    else throw parse_error("unknown algebra family '" + std::string(name) + "'");
    factors.push_back({family, size});
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  return std::make_shared<const Algebra>(std::move(factors));
}

inline AlgebraPtr make_algebra(std::vector<Factor> factors) {
  return std::make_shared<const Algebra>(std::move(factors));
}

/// A point of an algebra in coordinates.
class Element {
 public:
  Element() = default;
  Element(AlgebraPtr algebra, Vector coords) : algebra_(std::move(algebra)), coords_(std::move(coords)) {
    if (!algebra_) throw std::invalid_argument("element without algebra");
    if (coords_.size() != algebra_->dim())
      throw mismatch_error("coordinate count " + std::to_string(coords_.size()) + " does not match dim " +
                           std::to_string(algebra_->dim()) + " of " + algebra_->spec());
  }

  static Element zero(AlgebraPtr algebra) {
    const int d = algebra->dim();
    return Element(std::move(algebra), Vector::Zero(d));
  }

  const Algebra& algebra() const { return *algebra_; }
  const AlgebraPtr& algebra_ptr() const { return algebra_; }
  const Vector& coords() const { return coords_; }
  Vector& mutable_coords() { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }

  auto block(std::size_t factor) const {
    return coords_.segment(algebra_->coord_offset(factor), algebra_->factor(factor).dim());
  }
  auto block(std::size_t factor) {
    return coords_.segment(algebra_->coord_offset(factor), algebra_->factor(factor).dim());
  }

  Element& operator+=(const Element& o) { check_same(o); coords_ += o.coords_; return *this; }
  Element& operator-=(const Element& o) { check_same(o); coords_ -= o.coords_; return *this; }
  Element& operator*=(double s) { coords_ *= s; return *this; }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator-(Element a) { a.coords_ = -a.coords_; return a; }
  friend Element operator*(double s, Element a) { return a *= s; }
  friend Element operator*(Element a, double s) { return a *= s; }

  void check_same(const Element& o) const {
    if (algebra_ != o.algebra_ && !(*algebra_ == *o.algebra_))
      throw mismatch_error("elements of different algebras: " + algebra_->spec() + " vs " + o.algebra_->spec());
  }

 private:
  AlgebraPtr algebra_;
  Vector coords_;
};

// ---------------------------------------------------------------------------
// symmetric matrix <-> svec coordinates

inline int svec_index(int i, int j, int k) {
  if (i > j) std::swap(i, j);
  return i * k - i * (i - 1) / 2 + (j - i);
}

inline Matrix svec_to_matrix(const Eigen::Ref<const Vector>& v, int k) {
  Matrix m(k, k);
  int idx = 0;
  for (int i = 0; i < k; ++i) {
    m(i, i) = v[idx++];
    for (int j = i + 1; j < k; ++j) {
      m(i, j) = m(j, i) = v[idx++] / kSqrt2;
    }
  }
  return m;
}

/// Upper triangle is read; callers validate symmetry.
inline Vector matrix_to_svec(const Matrix& m) {
  const int k = static_cast<int>(m.rows());
  Vector v(k * (k + 1) / 2);
  int idx = 0;
  for (int i = 0; i < k; ++i) {
    v[idx++] = m(i, i);
    for (int j = i + 1; j < k; ++j) v[idx++] = kSqrt2 * m(i, j);
  }
  return v;
}

/// Element of a single-factor sym:k algebra from a symmetric matrix. Rejects
/// matrices whose asymmetry exceeds 1e-12 relative; the stored element is
/// exactly symmetric by layout.
inline Element sym_element(const AlgebraPtr& algebra, const Matrix& m) {
  if (algebra->num_factors() != 1 || algebra->factor(0).family != Family::Sym)
    throw mismatch_error("sym_element needs a sym:k algebra, got " + algebra->spec());
  const int k = algebra->factor(0).size;
  if (m.rows() != k || m.cols() != k) throw mismatch_error("matrix size does not match " + algebra->spec());
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw domain_error("matrix is not symmetric");
  return Element(algebra, matrix_to_svec(0.5 * (m + m.transpose())));
}

/// Symmetric matrix of a sym factor block.
inline Matrix factor_matrix(const Element& x, std::size_t factor) {
  const auto& f = x.algebra().factor(factor);
  if (f.family != Family::Sym) throw mismatch_error("factor is not symmetric-matrix type");
  return svec_to_matrix(x.block(factor), f.size);
}

inline Matrix to_matrix(const Element& x) {
  if (x.algebra().num_factors() != 1) throw mismatch_error("to_matrix needs a single sym:k algebra");
  return factor_matrix(x, 0);
}

// ---------------------------------------------------------------------------
// algebra operations

inline Element unit(const AlgebraPtr& algebra) {
  Element e = Element::zero(algebra);
  for (std::size_t f = 0; f < algebra->num_factors(); ++f) {
    const Factor& fac = algebra->factor(f);
    auto b = e.block(f);
    switch (fac.family) {
      case Family::Rn: b.setOnes(); break;
      case Family::Spin: b[0] = 1.0; break;
      case Family::Sym:
        for (int i = 0; i < fac.size; ++i) b[svec_index(i, i, fac.size)] = 1.0;
        break;
    }
  }
  return e;
}

inline Element jordan_product(const Element& x, const Element& y) {
  x.check_same(y);
  Element out = Element::zero(x.algebra_ptr());
  const Algebra& alg = x.algebra();
  for (std::size_t f = 0; f < alg.num_factors(); ++f) {
    const Factor& fac = alg.factor(f);
    const auto xb = x.block(f);
    const auto yb = y.block(f);
    auto ob = out.block(f);
    switch (fac.family) {
      case Family::Rn:
        ob = xb.cwiseProduct(yb);
        break;
      case Family::Spin: {
        const int m = fac.size - 1;
        ob[0] = xb.dot(yb);
        ob.tail(m) = xb[0] * yb.tail(m) + yb[0] * xb.tail(m);
        break;
      }
      case Family::Sym: {
        const Matrix X = svec_to_matrix(xb, fac.size);
        const Matrix Y = svec_to_matrix(yb, fac.size);
        const Matrix XY = X * Y;
        ob = matrix_to_svec(0.5 * (XY + XY.transpose()));
        break;
      }
    }
  }
  return out;
}

inline Element square(const Element& x) { return jordan_product(x, x); }

inline double trace(const Element& x) {
  const Algebra& alg = x.algebra();
  double t = 0.0;
  for (std::size_t f = 0; f < alg.num_factors(); ++f) {
    const Factor& fac = alg.factor(f);
    const auto b = x.block(f);
    switch (fac.family) {
      case Family::Rn: t += b.sum(); break;
      case Family::Spin: t += 2.0 * b[0]; break;
      case Family::Sym:
        for (int i = 0; i < fac.size; ++i) t += b[svec_index(i, i, fac.size)];
        break;
    }
  }
  return t;
}

/// Trace inner product tr(x o y).
inline double inner(const Element& x, const Element& y) {
  x.check_same(y);
  const Algebra& alg = x.algebra();
  double s = 0.0;
  for (std::size_t f = 0; f < alg.num_factors(); ++f) {
    const double d = x.block(f).dot(y.block(f));
    s += alg.factor(f).family == Family::Spin ? 2.0 * d : d;
  }
  return s;
}

/// Norm induced by the trace inner product (equals the spectral 2-norm).
inline double trace_norm2(const Element& x) { return std::sqrt(std::max(0.0, inner(x, x))); }

// ---------------------------------------------------------------------------
// orthonormal coordinates (trace inner product); only spin blocks rescale

inline Vector metric_weights(const Algebra& alg) {
  Vector w = Vector::Ones(alg.dim());
  for (std::size_t f = 0; f < alg.num_factors(); ++f)
    if (alg.factor(f).family == Family::Spin) w.segment(alg.coord_offset(f), alg.factor(f).dim()).setConstant(kSqrt2);
  return w;
}

inline Vector to_orthonormal(const Element& x) { return x.coords().cwiseProduct(metric_weights(x.algebra())); }

inline Element from_orthonormal(const AlgebraPtr& algebra, const Vector& v) {
  return Element(algebra, v.cwiseQuotient(metric_weights(*algebra)));
}

}  // namespace eja
