#pragma once

// Operator norms ||T||_{r->s} relative to spectral norms: closed forms for
// Lyapunov maps, quadratic representations and positive maps, and a seeded
// lower-bound estimator for arbitrary maps.

#include "eja/norms.hpp"
#include "eja/operators.hpp"
#include "eja/random.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace eja {

struct uncovered_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline bool tag_is_positive(const LinearMap& T) {
  switch (T.kind()) {
    case MapKind::QuadRep:
    case MapKind::Congruence:
    case MapKind::Positive:
      return true;
    case MapKind::Schur:
      return jacobi_eigen(T.tag().matrix).values.minCoeff() >= -1e-10;
    default:
      return false;
  }
}

inline std::string pair_name(double r, double s) {
  auto f = [](double p) { return is_inf(p) ? std::string("inf") : std::to_string(p); };
  return "(" + f(r) + ", " + f(s) + ")";
}

}  // namespace detail

/// Exact ||T||_{r->s} where a closed form applies; throws uncovered_error
/// otherwise.
inline double op_norm_closed(const LinearMap& T, double r, double s) {
  check_exponent(r);
  check_exponent(s);
  const double rc = conjugate(r);
  switch (T.kind()) {
    case MapKind::Lyapunov: {
      const Element& a = *T.tag().a;
      if (is_inf(r)) return p_norm(a, s);
      if (s == 1.0) return p_norm(a, rc);
      if (r == 1.0 || is_inf(s) || r == s) return p_norm(a, kInf);
      break;
    }
    case MapKind::QuadRep: {
      const Element& a = *T.tag().a;
      if (is_inf(r)) return p_norm(square(a), s);
      if (s == 1.0) return p_norm(square(a), rc);
      if (r == 1.0 || is_inf(s) || r == s) {
        const double m = p_norm(a, kInf);
        return m * m;
      }
      break;
    }
    default:
      if (detail::tag_is_positive(T)) {
        const Element e = unit(T.algebra_ptr());
        if (is_inf(r)) return p_norm(T(e), s);
        if (s == 1.0) return p_norm(adjoint(T)(e), rc);
      }
      break;
  }
  throw uncovered_error(std::string("no closed form for ") + to_string(T.kind()) + " at " + detail::pair_name(r, s));
}

inline std::optional<double> try_op_norm_closed(const LinearMap& T, double r, double s) {
  try {
    return op_norm_closed(T, r, s);
  } catch (const uncovered_error&) {
    return std::nullopt;
  }
}

namespace detail {

class RatioSearch {
 public:
  RatioSearch(const LinearMap& T, double r, double s) : T_(T), r_(r), s_(s) {}

  double ratio(const Element& x) {
    ++evaluations_;
    const double den = p_norm(x, r_);
    if (!(den > 0.0)) return 0.0;
    const double value = p_norm(T_(x), s_) / den;
    if (value > best_) {
      best_ = value;
      best_x_ = x;
    }
    return value;
  }

  double best() const { return best_; }
  const std::optional<Element>& best_x() const { return best_x_; }
  long evaluations() const { return evaluations_; }

 private:
  const LinearMap& T_;
  double r_, s_;
  double best_ = 0.0;
  std::optional<Element> best_x_;
  long evaluations_ = 0;
};

// Shrinking random-perturbation hill climb on orthonormal coordinates.
inline void hill_climb(RatioSearch& search, Element start, Rng& rng, long max_evals, double min_step = 1e-10) {
  const AlgebraPtr alg = start.algebra_ptr();
  const int d = alg->dim();
  Vector x = to_orthonormal(start);
  double norm = x.norm();
  if (norm == 0.0) return;
  x /= norm;
  double current = search.ratio(from_orthonormal(alg, x));
  double step = 0.3;
  int failures = 0;
  for (long it = 0; it < max_evals && step > min_step; ++it) {
    Vector y = x + step * rng.gaussian_vector(d) / std::sqrt(static_cast<double>(d));
    const double ny = y.norm();
    if (ny == 0.0) continue;
    y /= ny;
    const double value = search.ratio(from_orthonormal(alg, y));
    if (value > current) {
      current = value;
      x = y;
      failures = 0;
      step *= 1.5;
    } else if (++failures >= 2 * d) {
      step *= 0.5;
      failures = 0;
    }
  }
}

// Maximizes ||T(c)||_s over primitive idempotents c, which equals
// ||T||_{1->s} since the trace-norm unit ball is the convex hull of +-c.
inline double primitive_search(const LinearMap& T, double s, Rng& rng, int starts, long evals_per_start) {
  const AlgebraPtr& alg = T.algebra_ptr();
  RatioSearch search(T, 1.0, s);
  for (std::size_t f = 0; f < alg->num_factors(); ++f) {
    const Factor& fac = alg->factor(f);
    auto make = [&](const Vector& u) {
      Element c = Element::zero(alg);
      auto b = c.block(f);
      if (fac.family == Family::Spin) {
        b[0] = 0.5;
        b.tail(fac.size - 1) = 0.5 * u;
      } else {
        b = matrix_to_svec(u * u.transpose());
      }
      return c;
    };
    if (fac.family == Family::Rn) {
      for (int i = 0; i < fac.size; ++i) {
        Element c = Element::zero(alg);
        c.block(f)[i] = 1.0;
        search.ratio(c);
      }
      continue;
    }
    const int m = fac.family == Family::Spin ? fac.size - 1 : fac.size;
    if (m == 1) {
      search.ratio(make(Vector::Constant(1, 1.0)));
      search.ratio(make(Vector::Constant(1, -1.0)));
      continue;
    }
    for (int st = 0; st < starts; ++st) {
      Vector u = rng.unit_vector(m);
      double current = search.ratio(make(u));
      double step = 0.5;
      int failures = 0;
      for (long it = 0; it < evals_per_start && step > 1e-10; ++it) {
        Vector v = u + step * rng.gaussian_vector(m) / std::sqrt(static_cast<double>(m));
        const double nv = v.norm();
        if (nv == 0.0) continue;
        v /= nv;
        const double value = search.ratio(make(v));
        if (value > current) {
          current = value;
          u = v;
          failures = 0;
          step *= 1.5;
        } else if (++failures >= 2 * m) {
          step *= 0.5;
          failures = 0;
        }
      }
    }
  }
  return search.best();
}

inline void add_frame(std::vector<Element>& out, const Element& z) {
  for (auto& c : spectral_decompose(z).frame) out.push_back(std::move(c));
}

inline void add_witness(std::vector<Element>& out, const Element& z, double p) {
  if (p_norm(z, kInf) > 0.0) out.push_back(dual_witness(z, p));
}

}  // namespace detail

/// Lower bound on ||T||_{r->s}: the best ratio over the unit element, frames
/// and dual witnesses of T(e), T*(e) and the tag element, seeded random
/// points, followed by local ascent. For r = 1 the search runs over primitive
/// idempotents; for s = inf it runs on T* through ||T||_{r->inf} =
/// ||T*||_{1->r'}. For r = s = 2 the top singular vector gives the norm.
/// `budget` bounds the number of random and ascent evaluations.
inline double op_norm_estimate(const LinearMap& T, double r, double s, long budget = 2000, std::uint64_t seed = 0) {
  check_exponent(r);
  check_exponent(s);
  if (budget < 1) throw std::invalid_argument("op_norm_estimate: budget must be >= 1");
  const AlgebraPtr& alg = T.algebra_ptr();
  const double rc = conjugate(r);
  const LinearMap Tstar = adjoint(T);
  const Element e = unit(alg);
  Rng rng = Rng::keyed(seed, "op_norm_estimate", alg->spec(), 0);

  std::vector<Element> cands;
  cands.push_back(e);
  std::vector<Element> anchors{T(e), Tstar(e)};
  if (T.tag().a) {
    anchors.push_back(*T.tag().a);
    anchors.push_back(square(*T.tag().a));
  }
  if (T.tag().b) anchors.push_back(*T.tag().b);
  for (const auto& z : anchors) {
    detail::add_frame(cands, z);
    detail::add_witness(cands, z, rc);
  }
  if (r == 2.0 && s == 2.0) {
    const Eigen::JacobiSVD<Matrix> svd(T.coeffs(), Eigen::ComputeFullV);
    cands.push_back(from_orthonormal(alg, svd.matrixV().col(0)));
  }

  detail::RatioSearch search(T, r, s);
  for (const auto& c : cands) search.ratio(c);

  const long random_points = std::max(1L, budget / 4);
  for (long i = 0; i < random_points; ++i) {
    search.ratio(i % 2 == 0 ? random_element(alg, rng) : random_primitive(alg, rng));
  }

  double best = search.best();
  const long ascent = budget - random_points;
  if (ascent > 0 && search.best_x()) {
    detail::hill_climb(search, *search.best_x(), rng, ascent);
    best = search.best();
  }
  if (budget >= 64) {
    const int starts = static_cast<int>(std::clamp(budget / 100, 8L, 32L));
    const long per_start = std::max(400L, budget / (2 * starts));
    if (r == 1.0) best = std::max(best, detail::primitive_search(T, s, rng, starts, per_start));
    if (is_inf(s)) best = std::max(best, detail::primitive_search(Tstar, rc, rng, starts, per_start));
  }
  return best;
}

}  // namespace eja
