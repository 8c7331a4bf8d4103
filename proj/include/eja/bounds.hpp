#pragma once

// Pointwise norm bounds for positive maps and the majorization
// P_a(x) < a^2 o x with its norm consequences.

#include "eja/norms.hpp"
#include "eja/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eja {

/// Relative slack of lhs <= rhs: (rhs - lhs) / max(|lhs|, |rhs|, floor).
inline double relative_slack(double lhs, double rhs) { return (rhs - lhs) / gap_scale(lhs, rhs); }

struct NamedGap {
  std::string name;
  double gap;
};

struct PositiveBoundGaps {
  double one_norm;  // ||x||_p ||P*(e)||_q - ||P(x)||_1, relative
  double p_norm;    // ||x||_inf ||P(e)||_p - ||P(x)||_p, relative
};

/// For positive P: ||P(x)||_1 <= ||x||_p ||P*(e)||_q and
/// ||P(x)||_p <= ||x||_inf ||P(e)||_p. Positivity of P is the caller's
/// responsibility.
inline PositiveBoundGaps verify_positive_bounds(const LinearMap& P, const Element& x, double p) {
  const double q = conjugate(p);
  const Element e = unit(P.algebra_ptr());
  const Element px = P(x);
  const Vector lpx = eigenvalues(px);
  const Vector lx = eigenvalues(x);
  PositiveBoundGaps g;
  g.one_norm = relative_slack(vector_p_norm(lpx, 1.0), vector_p_norm(lx, p) * p_norm(adjoint(P)(e), q));
  g.p_norm = relative_slack(vector_p_norm(lpx, p), vector_p_norm(lx, kInf) * p_norm(P(e), p));
  return g;
}

/// All checks derived from P_a(x) < a^2 o x for one (a, x, p). When `mu` is
/// given, a must be >= 0 and the shifted comparison
/// ||P_sqrt(a)(x) - mu e||_p <= ||a o x - mu e||_p is included.
inline std::vector<NamedGap> verify_pa_majorization(const Element& a, const Element& x, double p,
                                                    std::optional<double> mu = std::nullopt,
                                                    double tol = kDefaultTol) {
  a.check_same(x);
  const double q = conjugate(p);
  const Element a2 = square(a);
  const Element pax = quad_rep(a)(x);
  const Element a2x = jordan_product(a2, x);
  const Vector l_pax = eigenvalues(pax);
  const Vector l_a2x = eigenvalues(a2x);
  const Vector l_x = eigenvalues(x);
  const Vector l_a2 = eigenvalues(a2);

  std::vector<NamedGap> gaps;
  gaps.push_back({"majorization", majorization_slack(l_a2x, l_pax)});
  gaps.push_back({"one-norm-pa-vs-lyapunov", relative_slack(vector_p_norm(l_pax, 1.0), vector_p_norm(l_a2x, 1.0))});
  gaps.push_back({"one-norm-lyapunov-vs-holder",
                  relative_slack(vector_p_norm(l_a2x, 1.0), vector_p_norm(l_x, p) * vector_p_norm(l_a2, q))});
  gaps.push_back({"p-norm-pa-vs-lyapunov", relative_slack(vector_p_norm(l_pax, p), vector_p_norm(l_a2x, p))});
  gaps.push_back({"p-norm-lyapunov-vs-bound",
                  relative_slack(vector_p_norm(l_a2x, p), vector_p_norm(l_x, kInf) * vector_p_norm(l_a2, p))});
  const double lscale = std::max({l_a2x.cwiseAbs().maxCoeff(), l_pax.cwiseAbs().maxCoeff(), kScaleFloor});
  gaps.push_back({"lambda-max", (l_a2x.maxCoeff() - l_pax.maxCoeff()) / lscale});
  gaps.push_back({"lambda-min", (l_pax.minCoeff() - l_a2x.minCoeff()) / lscale});

  if (mu) {
    const Vector l_a = eigenvalues(a);
    if (l_a.minCoeff() < -tol * std::max(1.0, l_a.cwiseAbs().maxCoeff()))
      throw domain_error("verify_pa_majorization: shifted comparison needs a >= 0");
    const Element e = unit(a.algebra_ptr());
    const Element root = sqrt_element(a, tol);
    const Element lhs = quad_rep(root)(x);
    const Element rhs = jordan_product(a, x);
    gaps.push_back({"sqrt-majorization", majorization_slack(eigenvalues(rhs), eigenvalues(lhs))});
    gaps.push_back({"shifted-norm", relative_slack(p_norm(lhs - *mu * e, p), p_norm(rhs - *mu * e, p))});
  }
  return gaps;
}

}  // namespace eja
