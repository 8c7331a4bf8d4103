#pragma once

// K-functionals of the couple (L_r, L_s) on the n-point counting measure and
// of (V_r, V_s) on an algebra, the K-method norm integral, and verification
// of ||T||_{p->p} <= ||T||_{r->r}^{1-theta} ||T||_{s->s}^theta.

#include "eja/bounds.hpp"
#include "eja/norms.hpp"
#include "eja/operators.hpp"
#include "eja/opnorm.hpp"
#include "eja/random.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>
#include <utility>
#include <vector>

namespace eja {

/// 1/p = (1 - theta)/r + theta/s with 1/inf = 0.
inline double interpolated_exponent(double r, double s, double theta) {
  check_exponent(r);
  check_exponent(s);
  if (!(theta >= 0.0 && theta <= 1.0)) throw domain_error("theta must lie in [0, 1]");
  const double inv = (1.0 - theta) * (is_inf(r) ? 0.0 : 1.0 / r) + theta * (is_inf(s) ? 0.0 : 1.0 / s);
  return inv == 0.0 ? kInf : 1.0 / inv;
}

struct KQuery {
  double t;
  double r;
  double s;
  double theta;
  double p;

  KQuery(double t_, double r_, double s_, double theta_)
      : t(t_), r(r_), s(s_), theta(theta_), p(interpolated_exponent(r_, s_, theta_)) {
    if (!(t > 0.0)) throw domain_error("K-functional needs t > 0");
  }
};

namespace detail {

inline constexpr double kGolden = 0.6180339887498949;

template <class F>
double golden_min(F&& phi, double lo, double hi, int iterations = 200) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int i = 0; i < iterations && b - a > 0.0; ++i) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = phi(x2);
    }
  }
  return std::min(f1, f2);
}

// The optimal split g + h = |f| is monotone in |f|: the minimizer over
// 0 <= g <= |f| lies on a one-parameter family. Clip families put a cap on
// one part; for 1 < r, s < inf the stationarity condition
// g_i^{r-1} = kappa (|f_i| - g_i)^{s-1} traces the family in kappa. The
// objective restricted to the family is unimodal, so a breakpoint/grid scan
// followed by golden section finds the minimum.
enum class SplitFamily { ClipH, ClipG, Balanced };

inline SplitFamily split_family(double r, double s) {
  if (is_inf(s) || r == 1.0) return SplitFamily::ClipH;
  if (is_inf(r) || s == 1.0) return SplitFamily::ClipG;
  return SplitFamily::Balanced;
}

inline double balanced_component(double a, double r, double s, double log_kappa) {
  if (a <= 0.0) return 0.0;
  // (r-1) ln u - (s-1) ln(1-u) = log_kappa + (s-r) ln a, for u = g/a in (0,1)
  const double target = log_kappa + (s - r) * std::log(a);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double u = 0.5 * (lo + hi);
    const double val = (r - 1.0) * std::log(u) - (s - 1.0) * std::log1p(-u);
    if (val < target) lo = u;
    else hi = u;
  }
  return a * 0.5 * (lo + hi);
}

/// Minimizes objective(g) over the optimal family for |f| = a.
inline double minimize_split(const Vector& a, double r, double s, const std::function<double(const Vector&)>& objective) {
  const int n = static_cast<int>(a.size());
  const double top = a.maxCoeff();
  double best = std::min(objective(Vector::Zero(n)), objective(a));
  const SplitFamily fam = split_family(r, s);
  if (fam != SplitFamily::Balanced) {
    auto g_of = [&](double c) {
      Vector g(n);
      for (int i = 0; i < n; ++i) g[i] = fam == SplitFamily::ClipG ? std::min(a[i], c) : std::max(a[i] - c, 0.0);
      return g;
    };
    auto phi = [&](double c) { return objective(g_of(c)); };
    std::vector<double> knots{0.0, top};
    for (int i = 0; i < n; ++i) knots.push_back(a[i]);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::size_t arg = 0;
    double knot_best = kInf;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const double v = phi(knots[i]);
      if (v < knot_best) { knot_best = v; arg = i; }
    }
    best = std::min(best, knot_best);
    if (arg > 0) best = std::min(best, golden_min(phi, knots[arg - 1], knots[arg]));
    if (arg + 1 < knots.size()) best = std::min(best, golden_min(phi, knots[arg], knots[arg + 1]));
    return best;
  }
  auto g_of = [&](double lk) {
    Vector g(n);
    for (int i = 0; i < n; ++i) g[i] = balanced_component(a[i], r, s, lk);
    return g;
  };
  auto phi = [&](double lk) { return objective(g_of(lk)); };
  const double span = 60.0 * (r + s);
  const int steps = 240;
  double arg = -span, grid_best = kInf;
  for (int i = 0; i <= steps; ++i) {
    const double lk = -span + 2.0 * span * i / steps;
    const double v = phi(lk);
    if (v < grid_best) { grid_best = v; arg = lk; }
  }
  const double h = 2.0 * span / steps;
  best = std::min({best, grid_best, golden_min(phi, arg - h, arg + h)});
  return best;
}

}  // namespace detail

/// K(t, f; L_r, L_s) = inf { ||g||_r + t ||h||_s : f = g + h }.
inline double k_lp(double t, const Vector& f, double r, double s) {
  check_exponent(r);
  check_exponent(s);
  if (!(t > 0.0)) throw domain_error("K-functional needs t > 0");
  const Vector a = f.cwiseAbs();
  if (a.size() == 0 || a.maxCoeff() == 0.0) return 0.0;
  if (r == s) return std::min(1.0, t) * vector_p_norm(a, r);
  return detail::minimize_split(a, r, s, [&](const Vector& g) {
    return vector_p_norm(g, r) + t * vector_p_norm(a - g, s);
  });
}

/// Projected subgradient on 0 <= g <= |f| with step c/sqrt(k), warm-started
/// from the better of g = 0 and g = |f|. Slow and approximate; kept as an
/// independent cross-check of k_lp.
inline double k_lp_subgradient(double t, const Vector& f, double r, double s, int iterations = 10000) {
  if (!(t > 0.0)) throw domain_error("K-functional needs t > 0");
  const Vector a = f.cwiseAbs();
  const int n = static_cast<int>(a.size());
  if (n == 0 || a.maxCoeff() == 0.0) return 0.0;
  auto objective = [&](const Vector& g) { return vector_p_norm(g, r) + t * vector_p_norm(a - g, s); };
  // subgradient of ||v||_p at v >= 0
  auto norm_grad = [](const Vector& v, double p) {
    Vector grad = Vector::Zero(v.size());
    const double nv = vector_p_norm(v, p);
    if (nv == 0.0) return grad;
    if (is_inf(p)) {
      int k = 0;
      v.maxCoeff(&k);
      grad[k] = 1.0;
    } else if (p == 1.0) {
      for (int i = 0; i < v.size(); ++i) grad[i] = v[i] > 0.0 ? 1.0 : 0.0;
    } else {
      for (int i = 0; i < v.size(); ++i) grad[i] = std::pow(v[i] / nv, p - 1.0);
    }
    return grad;
  };
  Vector g = objective(Vector::Zero(n)) <= objective(a) ? Vector::Zero(n) : Vector(a);
  double best = objective(g);
  const double c = a.maxCoeff();
  for (int k = 1; k <= iterations; ++k) {
    const Vector grad = norm_grad(g, r) - t * norm_grad(a - g, s);
    const double gn = grad.norm();
    if (gn == 0.0) break;
    g -= (c / std::sqrt(static_cast<double>(k))) * grad / gn;
    g = g.cwiseMax(0.0).cwiseMin(a);
    best = std::min(best, objective(g));
  }
  return best;
}

/// K(t, f; L_1, L_inf) = integral over [0, t] of the decreasing rearrangement
/// of |f| (a step function on the counting measure).
inline double k_l1_linf_closed(double t, const Vector& f) {
  if (!(t > 0.0)) throw domain_error("K-functional needs t > 0");
  const Vector a = sorted_decreasing(f.cwiseAbs());
  double total = 0.0;
  double remaining = t;
  for (int i = 0; i < a.size() && remaining > 0.0; ++i) {
    const double w = std::min(1.0, remaining);
    total += w * a[i];
    remaining -= w;
  }
  return total;
}

/// K(t, x; V_r, V_s), computed as K(t, lambda(x); L_r, L_s).
inline double k_v(double t, const Element& x, double r, double s) { return k_lp(t, eigenvalues(x), r, s); }

/// K(t, x; V_r, V_s) computed in the algebra: the objective
/// ||a||_r + t ||x - a||_s is evaluated through spectral norms of algebra
/// elements, minimized over decompositions in x's frame, then probed with
/// `trials` random off-frame perturbation directions (improvements are kept).
inline double k_v_direct(double t, const Element& x, double r, double s, int trials = 32, std::uint64_t seed = 0) {
  check_exponent(r);
  check_exponent(s);
  if (!(t > 0.0)) throw domain_error("K-functional needs t > 0");
  const SpectralDecomposition sd = spectral_decompose(x);
  const Vector& lam = sd.eigenvalues;
  const Vector a = lam.cwiseAbs();
  if (a.maxCoeff() == 0.0) return 0.0;
  auto phi = [&](const Element& part) { return p_norm(part, r) + t * p_norm(x - part, s); };
  auto lift = [&](const Vector& g) {
    Vector w(g.size());
    for (int i = 0; i < g.size(); ++i) w[i] = lam[i] < 0.0 ? -g[i] : g[i];
    return combine(sd.frame, w);
  };
  Vector best_g = Vector::Zero(a.size());
  double best = kInf;
  auto frame_objective = [&](const Vector& g) {
    const double v = phi(lift(g));
    if (v < best) { best = v; best_g = g; }
    return v;
  };
  if (r == s) {
    frame_objective(Vector::Zero(a.size()));
    frame_objective(a);
  } else {
    detail::minimize_split(a, r, s, frame_objective);
  }
  Element current = lift(best_g);
  Rng rng = Rng::keyed(seed, "k_v_direct", x.algebra().spec(), 0);
  const double scale = trace_norm2(x);
  for (int i = 0; i < trials; ++i) {
    const Element dir = random_element(x.algebra_ptr(), rng);
    const double dn = trace_norm2(dir);
    for (double eta : {1e-1, 1e-2, 1e-3, 1e-4}) {
      for (double sign : {1.0, -1.0}) {
        const Element cand = current + (sign * eta * scale / dn) * dir;
        const double v = phi(cand);
        if (v < best) {
          best = v;
          current = cand;
        }
      }
    }
  }
  return best;
}

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double eps) {
  // split into panels so narrow features are not skipped by the first probe
  const int panels = 16;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + (b - a) * i / panels;
    const double hi = a + (b - a) * (i + 1) / panels;
    const double flo = f(lo), fhi = f(hi), fm = f(0.5 * (lo + hi));
    total += adaptive_simpson(f, lo, hi, flo, fm, fhi, simpson(lo, hi, flo, fm, fhi), eps / panels, 40);
  }
  return total;
}

}  // namespace detail

/// [ integral_0^inf (t^{-theta} K(t, f; L_r, L_s))^p dt/t ]^{1/p}, with
/// 1/p = (1-theta)/r + theta/s, r < s and 0 < theta < 1. On the counting
/// measure this is a norm equivalent to ||f||_p; it is proportional to
/// ||f||_p along rays and on vectors with a single nonzero level.
inline double pnorm_via_k(const Vector& f, double r, double s, double theta) {
  check_exponent(r);
  check_exponent(s);
  if (!(r < s)) throw domain_error("pnorm_via_k needs r < s");
  if (!(theta > 0.0 && theta < 1.0)) throw domain_error("pnorm_via_k needs 0 < theta < 1");
  const double p = interpolated_exponent(r, s, theta);
  if (f.size() == 0 || f.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const double nr = vector_p_norm(f, r);
  const double ns = vector_p_norm(f, s);
  auto integrand = [&](double u) {
    const double t = std::exp(u);
    return std::pow(std::exp(-theta * u) * k_lp(t, f, r, s), p);
  };
  // tails: K <= t ||f||_s on the left, K <= ||f||_r on the right
  auto left_tail = [&](double U) { return std::pow(ns, p) * std::exp(-(1.0 - theta) * p * U) / ((1.0 - theta) * p); };
  auto right_tail = [&](double U) { return std::pow(nr, p) * std::exp(-theta * p * U) / (theta * p); };
  double U = 8.0;
  double total = detail::integrate(integrand, -U, U, 1e-10 * std::pow(std::max(nr, ns), p));
  for (int grow = 0; grow < 12 && left_tail(U) + right_tail(U) > 1e-6 * total; ++grow) {
    const double next = 2.0 * U;
    const double eps = 1e-10 * std::pow(std::max(nr, ns), p);
    total += detail::integrate(integrand, -next, -U, eps) + detail::integrate(integrand, U, next, eps);
    U = next;
  }
  return std::pow(total, 1.0 / p);
}

// ---------------------------------------------------------------------------

/// Doubly stochastic A, B with lambda(a+b) = A lambda(a) + B lambda(b).
struct MajorizationSplit {
  Matrix A;
  Matrix B;
  double residual = 0.0;
};

/// A_ij = <f_i, e_j(a)> and B_ij = <f_i, e_j(b)>, where f is the ordered
/// frame of a+b and e(a), e(b) those of a and b. Both are doubly stochastic
/// since frame elements are positive with unit trace.
inline MajorizationSplit majorization_split(const Element& a, const Element& b) {
  a.check_same(b);
  const SpectralDecomposition sab = spectral_decompose(a + b);
  const SpectralDecomposition sa = spectral_decompose(a);
  const SpectralDecomposition sb = spectral_decompose(b);
  const int n = a.algebra().rank();
  auto build = [&](const SpectralDecomposition& part) {
    if (part.eigenvalues.cwiseAbs().maxCoeff() == 0.0) return Matrix(Matrix::Identity(n, n));
    Matrix M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        M(i, j) = inner(sab.frame[static_cast<std::size_t>(i)], part.frame[static_cast<std::size_t>(j)]);
    return M;
  };
  MajorizationSplit out;
  out.A = build(sa);
  out.B = build(sb);
  out.residual = (out.A * sa.eigenvalues + out.B * sb.eigenvalues - sab.eigenvalues).norm();
  return out;
}

// ---------------------------------------------------------------------------

struct InterpolationReport {
  double m_r = 0.0;
  double m_s = 0.0;
  double m_p = 0.0;
  double p = 0.0;
  bool m_r_closed = false;
  bool m_s_closed = false;
  bool m_p_closed = false;
  double bound = 0.0;        // m_r^{1-theta} m_s^theta
  double gap = 0.0;          // (bound - m_p) relative to max(bound, m_p)
  bool pointwise_checked = false;
  double pointwise_worst = 0.0;  // most negative relative slack of the K bound
  int pointwise_samples = 0;
};

/// Norm of T at exponent p: closed form when available, otherwise the
/// estimator's lower bound. Returns (value, closed?).
inline std::pair<double, bool> operator_norm(const LinearMap& T, double p, long budget, std::uint64_t seed) {
  if (auto c = try_op_norm_closed(T, p, p)) return {*c, true};
  return {op_norm_estimate(T, p, p, budget, seed), false};
}

/// Compares M_p with M_r^{1-theta} M_s^theta and, when M_r and M_s are
/// exact, checks K(t, T(x)) <= M_r K((M_s/M_r) t, x) on `trials` samples.
/// Estimated norms are lower bounds, so the reported gap is exact only when
/// M_r and M_s come from closed forms.
inline InterpolationReport verify_interpolation(const LinearMap& T, double r, double s, double theta, int trials,
                                                std::uint64_t seed, long budget = 2000) {
  if (trials < 1) throw std::invalid_argument("verify_interpolation: trials must be >= 1");
  InterpolationReport rep;
  rep.p = interpolated_exponent(r, s, theta);
  if (T.coeffs().cwiseAbs().maxCoeff() == 0.0) {
    rep.m_r_closed = rep.m_s_closed = rep.m_p_closed = true;
    return rep;
  }
  std::tie(rep.m_r, rep.m_r_closed) = operator_norm(T, r, budget, seed);
  std::tie(rep.m_s, rep.m_s_closed) = operator_norm(T, s, budget, seed + 1);
  std::tie(rep.m_p, rep.m_p_closed) = operator_norm(T, rep.p, budget, seed + 2);
  rep.bound = std::pow(rep.m_r, 1.0 - theta) * std::pow(rep.m_s, theta);
  rep.gap = (rep.bound - rep.m_p) / gap_scale(rep.bound, rep.m_p);

  if (rep.m_r_closed && rep.m_s_closed && rep.m_r > 0.0) {
    rep.pointwise_checked = true;
    Rng rng = Rng::keyed(seed, "interpolation-pointwise", T.algebra().spec(), 0);
    for (int i = 0; i < trials; ++i) {
      const double t = std::exp(rng.uniform(-3.0, 3.0));
      const Element x = random_element(T.algebra_ptr(), rng);
      const double lhs = k_v(t, T(x), r, s);
      const double rhs = rep.m_r * k_v(rep.m_s / rep.m_r * t, x, r, s);
      rep.pointwise_worst = std::min(rep.pointwise_worst, relative_slack(lhs, rhs));
      ++rep.pointwise_samples;
    }
  }
  return rep;
}

}  // namespace eja
