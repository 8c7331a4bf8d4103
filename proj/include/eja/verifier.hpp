#pragma once

// Seeded property suites over one algebra, report emission and witness replay.
//
// Every check draws its instances from Rng::keyed(seed, check name, algebra
// spec, trial index), so the sample stream does not depend on how trials are
// sharded across worker threads. A check returns a normalized gap; gap >= 0
// means the property holds, and gap < -tolerance is a violation.

#include "eja/bounds.hpp"
#include "eja/interpolation.hpp"
#include "eja/norms.hpp"
#include "eja/operators.hpp"
#include "eja/opnorm.hpp"
#include "eja/random.hpp"
#include "eja/serialize.hpp"
#include "eja/spectral.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eja {

inline constexpr const char* kReportSchema = "eja-report/1";
inline constexpr const char* kWitnessSchema = "eja-witness/1";

struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"fan-theobald",    "holder",         "duality",       "positive-maps",
                                              "pa-majorization", "operator-norms", "interpolation", "appendix"};
  return names;
}

// Stable names of the results the checks verify; report records carry one.
inline const std::vector<std::string>& anchor_registry() {
  static const std::vector<std::string> anchors{
      "generalized-fan-theobald",   "fan-theobald-equality",          "holder-type-inequality",
      "holder-duality",             "holder-equality-conditions",     "spectral-norm-minkowski",
      "holder-sup-norm-inequalities", "peirce-contraction",             "schur-convexity",
      "sign-element",               "positive-map-bounds",            "positive-map-cone-invariance",
      "schur-product-maps",         "doubly-stochastic-majorization", "z-transformation-inverse",
      "positive-map-norm-bound",    "quadratic-representation-majorization",
      "quadratic-representation-consequences",                        "operator-norm-formulas",
      "operator-norm-lower-bounds", "operator-norm-duality",          "k-functional-spectral-reduction",
      "k-functional-closed-form",   "k-functional-properties",        "k-method-norm-recovery",
      "operator-norm-interpolation",      "interpolation-pointwise-bound",  "eigenvalue-sum-majorization",
      "appendix-pair-identity",     "appendix-doubly-stochastic",     "appendix-gram",
      "appendix-peirce-scaling"};
  return anchors;
}

struct SuiteConfig {
  std::string suite = "all";
  std::string algebra = "sym:3";
  long trials = 100;
  std::uint64_t seed = 0;
  std::vector<double> p_list{1.0, 1.5, 2.0, 3.0, kInf};
  double tol = 1e-9;
  std::string report_path;
  std::string format = "json";
  int jobs = 1;

  void validate() const {
    if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
      throw config_error("unknown suite: " + suite);
    parse_algebra(algebra);
    if (trials < 1) throw config_error("trials must be a positive integer");
    if (p_list.empty()) throw config_error("p list is empty");
    for (double p : p_list)
      if (!(p >= 1.0)) throw config_error("p values must lie in [1, inf]");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw config_error("tol must be a positive real");
    if (format != "json" && format != "text") throw config_error("format must be json or text");
    if (jobs < 1) throw config_error("jobs must be >= 1");
  }
};

// Inputs of one trial. Everything a check reads lives here so that a stored
// witness reproduces the evaluation exactly.
struct Instance {
  std::map<std::string, Element> elements;
  std::map<std::string, LinearMap> maps;
  std::map<std::string, Matrix> matrices;
  std::map<std::string, double> scalars;

  void put(const std::string& k, Element x) { elements.insert_or_assign(k, std::move(x)); }
  void put(const std::string& k, LinearMap T) { maps.insert_or_assign(k, std::move(T)); }
  void put(const std::string& k, Matrix m) { matrices.insert_or_assign(k, std::move(m)); }
  void put(const std::string& k, double v) { scalars.insert_or_assign(k, v); }
  const Element& el(const std::string& k) const { return elements.at(k); }
  const LinearMap& map(const std::string& k) const { return maps.at(k); }
  const Matrix& mat(const std::string& k) const { return matrices.at(k); }
  double num(const std::string& k) const { return scalars.at(k); }

  json to_json() const {
    json j = json::object();
    for (const auto& [k, x] : elements) j["elements"][k] = element_to_json(x);
    for (const auto& [k, T] : maps) j["maps"][k] = map_to_json(T);
    for (const auto& [k, m] : matrices) j["matrices"][k] = matrix_to_json(m);
    for (const auto& [k, v] : scalars) j["scalars"][k] = number_to_json(v);
    return j;
  }

  static Instance from_json(const json& j) {
    Instance inst;
    if (j.contains("elements"))
      for (const auto& [k, v] : j.at("elements").items()) inst.put(k, element_from_json(v));
    if (j.contains("maps"))
      for (const auto& [k, v] : j.at("maps").items()) inst.put(k, map_from_json(v));
    if (j.contains("matrices"))
      for (const auto& [k, v] : j.at("matrices").items()) inst.put(k, matrix_from_json(v));
    if (j.contains("scalars"))
      for (const auto& [k, v] : j.at("scalars").items()) inst.put(k, number_from_json(v));
    return inst;
  }
};

struct CheckContext {
  AlgebraPtr algebra;
  std::vector<double> p_list;
  double tol = 1e-9;
};

struct Check {
  std::string suite;
  std::string name;
  std::string anchor;
  std::optional<double> tolerance;  // pinned; otherwise the config tol
  long trial_num = 1, trial_den = 1;
  std::function<bool(const Algebra&)> applies;
  std::function<Instance(Rng&, const CheckContext&, long)> generate;
  std::function<double(const Instance&, const CheckContext&)> evaluate;

  long trial_count(long trials) const { return std::max(1L, trials * trial_num / trial_den); }
  double tol(const CheckContext& ctx) const { return tolerance.value_or(ctx.tol); }
};

struct CheckRecord {
  std::string name;
  std::string anchor;
  double tolerance = 0.0;
  long trials = 0;
  double worst_gap = kInf;
  long worst_trial = -1;
  long violation_count = 0;
  std::optional<json> witness;

  bool operator==(const CheckRecord&) const = default;
};

struct Report {
  std::string schema = kReportSchema;
  std::string suite;
  std::string algebra;
  long trials = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<double> p_list;
  std::string started;
  double elapsed_seconds = 0.0;
  std::vector<CheckRecord> checks;
  bool pass = true;
};

inline bool violates(double gap, double tol) { return !(gap >= -tol); }

namespace detail {

inline double bool_gap(bool ok) { return ok ? 0.0 : -1.0; }

inline Element monotone_image(const Element& x, int which) {
  switch (which % 4) {
    case 0: return apply_spectral_fn(x, [](double t) { return t * t * t + t; });
    case 1: return apply_spectral_fn(x, [](double t) { return std::atan(2.0 * t); });
    case 2: return apply_spectral_fn(x, [](double t) { return std::exp(t); });
    default: return apply_spectral_fn(x, [](double t) { return 2.0 * t + 1.0; });
  }
}

inline Element decreasing_image(const Element& x, int which) {
  return apply_spectral_fn(monotone_image(x, which), [](double t) { return -t; });
}

// y with ||x o y||_1 = ||x||_p ||y||_q, built in the frame of x.
inline Element equality_partner(const Element& x, double p, bool signed_powers) {
  const SpectralDecomposition sd = spectral_decompose(x);
  const Vector& l = sd.eigenvalues;
  Vector w = Vector::Zero(l.size());
  if (is_inf(p)) {
    int k = 0;
    l.cwiseAbs().maxCoeff(&k);
    w[k] = 1.0;
  } else {
    for (int i = 0; i < l.size(); ++i) {
      w[i] = std::pow(std::abs(l[i]), p - 1.0);
      if (signed_powers && l[i] < 0) w[i] = -w[i];
    }
  }
  return combine(sd.frame, w);
}

inline Matrix random_doubly_stochastic(int n, Rng& rng) {
  Matrix D = Matrix::Zero(n, n);
  double total = 0.0;
  std::vector<int> perm(n);
  for (int k = 0; k < 3; ++k) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.uniform_int(0, i)]);
    const double w = rng.uniform(0.1, 1.0);
    total += w;
    for (int i = 0; i < n; ++i) D(i, perm[i]) += w;
  }
  return D / total;
}

inline Matrix random_psd_matrix(int n, Rng& rng) {
  const Matrix G = rng.gaussian_matrix(n, n);
  return G * G.transpose() / n;
}

inline bool all_rn(const Algebra& alg) {
  for (const Factor& f : alg.factors())
    if (f.family != Family::Rn) return false;
  return true;
}

// Positive maps drawn from the families the bounds are claimed for.
inline LinearMap random_positive_map(const AlgebraPtr& alg, Rng& rng, long trial) {
  switch (trial % 5) {
    case 0: return quad_rep(random_element(alg, rng));
    case 1: return schur_map(random_correlation(alg->rank(), rng), random_frame(alg, rng));
    case 2:
      if (alg->num_factors() == 1 && alg->factor(0).family == Family::Sym) return congruence_map(alg, rng.gaussian_matrix(alg->rank(), alg->rank()));
      return quad_rep(random_element(alg, rng)) + quad_rep(random_element(alg, rng));
    case 3:
      if (all_rn(*alg)) {
        Matrix A = rng.gaussian_matrix(alg->dim(), alg->dim()).cwiseAbs();
        return LinearMap(alg, A, MapTag{MapKind::Positive, std::nullopt, std::nullopt, A, {}});
      }
      return schur_map(random_psd_matrix(alg->rank(), rng), random_frame(alg, rng));
    default: {
      // inverse of the positive-stable Z-map L_a + cI - P_b
      const Element a = random_element(alg, rng);
      const LinearMap P = quad_rep(random_element(alg, rng));
      const double c = 1.0 + p_norm(a, kInf) + P.coeffs().norm();
      return invert(lyapunov_of(a) + c * LinearMap::identity(alg) - P);
    }
  }
}

inline double interpolated_positive_bound(const LinearMap& P, double p) {
  const Element e = unit(P.algebra_ptr());
  const double pe = p_norm(P(e), kInf), pse = p_norm(adjoint(P)(e), kInf);
  return is_inf(p) ? pe : std::pow(pse, 1.0 / p) * std::pow(pe, 1.0 - 1.0 / p);
}

struct Triple {
  double r, s, theta;
};
inline const Triple kTriples[] = {{1.0, kInf, 0.5}, {1.0, 2.0, 1.0 / 3.0}, {2.0, kInf, 0.25}};

inline std::vector<LinearMap> tagged_maps(const Element& a, const Matrix& corr, const std::vector<Element>& frame) {
  return {lyapunov_of(a), quad_rep(a), schur_map(corr, frame)};
}

inline std::vector<Element> frame_of(const Instance& inst, const AlgebraPtr& alg) {
  std::vector<Element> frame;
  const Matrix& F = inst.mat("frame");
  for (int i = 0; i < F.cols(); ++i) frame.emplace_back(alg, F.col(i));
  return frame;
}

inline Matrix frame_matrix(const std::vector<Element>& frame) {
  Matrix F(frame.front().coords().size(), static_cast<int>(frame.size()));
  for (std::size_t i = 0; i < frame.size(); ++i) F.col(static_cast<int>(i)) = frame[i].coords();
  return F;
}

inline void tagged_instance(Instance& inst, Rng& rng, const AlgebraPtr& alg) {
  inst.put("a", random_element(alg, rng));
  inst.put("corr", random_correlation(alg->rank(), rng));
  inst.put("frame", frame_matrix(random_frame(alg, rng)));
  inst.put("seed", static_cast<double>(rng.next() >> 12));
}

inline std::vector<LinearMap> tagged_maps(const Instance& inst, const AlgebraPtr& alg) {
  return tagged_maps(inst.el("a"), inst.mat("corr"), frame_of(inst, alg));
}

inline std::vector<std::pair<double, double>> exponent_pairs(const std::vector<double>& ps) {
  std::vector<std::pair<double, double>> out;
  for (double r : ps)
    for (double s : ps) out.emplace_back(r, s);
  return out;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / gap_scale(a, b); }

inline Rng instance_rng(const Instance& inst) { return Rng(static_cast<std::uint64_t>(inst.num("seed"))); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Check registry

inline std::vector<Check> build_checks() {
  using namespace detail;
  std::vector<Check> out;
  const auto any = [](const Algebra&) { return true; };
  const auto pair_of = [](Rng& rng, const CheckContext& c, long) {
    Instance inst;
    inst.put("x", random_element(c.algebra, rng));
    inst.put("y", random_element(c.algebra, rng));
    return inst;
  };
  const auto add = [&](std::string suite, std::string name, std::string anchor, std::optional<double> tol, long num,
                       long den, std::function<bool(const Algebra&)> applies,
                       std::function<Instance(Rng&, const CheckContext&, long)> gen,
                       std::function<double(const Instance&, const CheckContext&)> eval) {
    out.push_back(Check{suite, suite + "." + name, std::move(anchor), tol, num, den, std::move(applies), std::move(gen),
                        std::move(eval)});
  };

  // fan-theobald -----------------------------------------------------------
  add("fan-theobald", "gap-nonnegative", "generalized-fan-theobald", std::nullopt, 1, 1, any, pair_of,
      [](const Instance& in, const CheckContext&) {
        const Element &x = in.el("x"), &y = in.el("y");
        const double scale = std::max(trace_norm2(x) * trace_norm2(y), kScaleFloor);
        return fan_theobald_gap(x, y) / scale;
      });
  add(
      "fan-theobald", "monotone-image-equality", "fan-theobald-equality", 1e-8, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long trial) {
        Instance inst;
        const Element x = random_element(c.algebra, rng);
        inst.put("x", x);
        inst.put("y", monotone_image(x, static_cast<int>(trial)));
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        const Element &x = in.el("x"), &y = in.el("y");
        const double scale = std::max(trace_norm2(x) * trace_norm2(y), kScaleFloor);
        return -fan_theobald_gap(x, y) / scale;
      });
  add(
      "fan-theobald", "strong-commute-detection", "fan-theobald-equality", std::nullopt, 1, 1,
      [](const Algebra& a) { return a.rank() >= 2; },
      [](Rng& rng, const CheckContext& c, long trial) {
        Instance inst;
        const Element x = random_element(c.algebra, rng);
        const bool increasing = trial % 2 == 0;
        inst.put("x", x);
        inst.put("y", increasing ? monotone_image(x, static_cast<int>(trial / 2))
                                 : decreasing_image(x, static_cast<int>(trial / 2)));
        inst.put("increasing", increasing ? 1.0 : 0.0);
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        return bool_gap(strongly_commute(in.el("x"), in.el("y"), 1e-8) == (in.num("increasing") != 0.0));
      });

  // holder -------------------------------------------------------------------
  add("holder", "chain", "holder-type-inequality", std::nullopt, 1, 1, any, pair_of,
      [](const Instance& in, const CheckContext& c) {
        double worst = kInf;
        for (double p : c.p_list) {
          const HolderResult h = verify_holder(in.el("x"), in.el("y"), p, c.tol);
          worst = std::min({worst, h.mid_slack(), h.upper_slack()});
        }
        return worst;
      });
  add(
      "holder", "dual-witness-equalities", "holder-duality", 1e-8, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        inst.put("x", random_element(c.algebra, rng));
        return inst;
      },
      [](const Instance& in, const CheckContext& c) {
        const Element& x = in.el("x");
        double worst = 0.0;
        for (double p : c.p_list) {
          const Element u = dual_witness(x, p);
          const double a = std::abs(inner(x, u)), b = p_norm(jordan_product(x, u), 1.0);
          const double r = p_norm(x, p) * p_norm(u, conjugate(p));
          worst = std::max({worst, rel_diff(a, r), rel_diff(b, r)});
        }
        return -worst;
      });
  add("holder", "minkowski", "spectral-norm-minkowski", std::nullopt, 1, 1, any, pair_of,
      [](const Instance& in, const CheckContext& c) {
        const Element &x = in.el("x"), &y = in.el("y");
        double worst = kInf;
        for (double p : c.p_list) worst = std::min(worst, relative_slack(p_norm(x + y, p), p_norm(x, p) + p_norm(y, p)));
        return worst;
      });
  add("holder", "sup-norm-inequalities", "holder-sup-norm-inequalities", std::nullopt, 1, 1, any, pair_of,
      [](const Instance& in, const CheckContext& c) {
        const Element &x = in.el("x"), &y = in.el("y");
        const Element xy = jordan_product(x, y);
        const double yinf = p_norm(y, kInf);
        double worst = std::min(relative_slack(p_norm(xy, 1.0), p_norm(x, 1.0) * yinf),
                                relative_slack(p_norm(xy, kInf), p_norm(x, kInf) * yinf));
        for (double p : c.p_list) worst = std::min(worst, relative_slack(p_norm(xy, p), p_norm(x, p) * yinf));
        return worst;
      });
  add(
      "holder", "peirce-contraction", "peirce-contraction", std::nullopt, 1, 10, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        const std::vector<Element> frame = random_frame(c.algebra, rng);
        Element idem = Element::zero(c.algebra);
        for (const Element& f : frame)
          if (rng.uniform() < 0.5) idem += f;
        inst.put("c", idem);
        inst.put("y", random_element(c.algebra, rng));
        return inst;
      },
      [](const Instance& in, const CheckContext& c) {
        const Element &idem = in.el("c"), &y = in.el("y");
        const Element eps = 2.0 * idem - unit(y.algebra_ptr());
        double worst = kInf;
        for (double q : c.p_list) worst = std::min(worst, relative_slack(p_norm(jordan_product(y, eps), q), p_norm(y, q)));
        const Element u = peirce_project(idem, 1.0, y), w = peirce_project(idem, 0.0, y);
        const Vector sum = eigenvalues(u + w), diff = eigenvalues(u - w);
        const double scale = std::max(p_norm(y, kInf), kScaleFloor);
        const double perm =
            (sorted_decreasing(sum.cwiseAbs()) - sorted_decreasing(diff.cwiseAbs())).cwiseAbs().maxCoeff() / scale;
        return std::min({worst, -perm, majorization_slack(eigenvalues(y), sum) / scale});
      });
  add(
      "holder", "schur-convexity", "schur-convexity", std::nullopt, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        const int n = c.algebra->rank();
        inst.put("v", Matrix(rng.gaussian_vector(n)));
        inst.put("D", random_doubly_stochastic(n, rng));
        return inst;
      },
      [](const Instance& in, const CheckContext& c) {
        const Vector v = in.mat("v").col(0);
        const Vector u = in.mat("D") * v;
        double worst = majorization_slack(v, u) / std::max(vector_p_norm(v, kInf), kScaleFloor);
        for (double p : c.p_list) worst = std::min(worst, relative_slack(vector_p_norm(u, p), vector_p_norm(v, p)));
        return worst;
      });

  // duality ------------------------------------------------------------------
  add(
      "duality", "equality-constructed", "holder-equality-conditions", std::nullopt, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long trial) {
        Instance inst;
        const Element x = random_element(c.algebra, rng);
        const double p = c.p_list[static_cast<std::size_t>(trial) % c.p_list.size()];
        inst.put("x", x);
        inst.put("p", p);
        inst.put("y", equality_partner(x, p, trial % 2 == 0));
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        const HolderResult h = verify_holder(in.el("x"), in.el("y"), in.num("p"), 1e-8);
        return bool_gap(h.diagnosis.holds && h.diagnosis.strong_commute && h.diagnosis.scalar_equality);
      });
  add(
      "duality", "equality-generic", "holder-equality-conditions", std::nullopt, 1, 1,
      [](const Algebra& a) { return a.rank() >= 2; },
      [](Rng& rng, const CheckContext& c, long trial) {
        Instance inst;
        inst.put("x", random_element(c.algebra, rng));
        inst.put("y", random_element(c.algebra, rng));
        inst.put("p", c.p_list[static_cast<std::size_t>(trial) % c.p_list.size()]);
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        const HolderResult h = verify_holder(in.el("x"), in.el("y"), in.num("p"), 1e-8);
        return bool_gap(!h.diagnosis.holds);
      });
  add(
      "duality", "sign-element", "sign-element", 1e-10, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        inst.put("z", random_element(c.algebra, rng));
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        const Element& z = in.el("z");
        const Element eps = epsilon_element(z);
        const Element e = unit(z.algebra_ptr());
        const double scale = std::max(trace_norm2(z), kScaleFloor);
        return -std::max(trace_norm2(square(eps) - e) / trace_norm2(e),
                         trace_norm2(jordan_product(z, eps) - abs_element(z)) / scale);
      });

  // positive-maps ----------------------------------------------------------
  const auto positive_instance = [](Rng& rng, const CheckContext& c, long trial) {
    Instance inst;
    inst.put("P", random_positive_map(c.algebra, rng, trial));
    inst.put("x", random_element(c.algebra, rng));
    inst.put("seed", static_cast<double>(rng.next() >> 12));
    return inst;
  };
  add("positive-maps", "pointwise-bounds", "positive-map-bounds", std::nullopt, 1, 1, any, positive_instance,
      [](const Instance& in, const CheckContext& c) {
        double worst = kInf;
        for (double p : c.p_list) {
          const PositiveBoundGaps g = verify_positive_bounds(in.map("P"), in.el("x"), p);
          worst = std::min({worst, g.one_norm, g.p_norm});
        }
        return worst;
      });
  add("positive-maps", "cone-invariance", "positive-map-cone-invariance", std::nullopt, 1, 10, any, positive_instance,
      [](const Instance& in, const CheckContext& c) {
        return std::min(0.0, is_positive(in.map("P"), 16, static_cast<std::uint64_t>(in.num("seed")), c.tol).worst);
      });
  add(
      "positive-maps", "schur-doubly-stochastic", "doubly-stochastic-majorization", std::nullopt, 1, 10, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        inst.put("P", schur_map(random_correlation(c.algebra->rank(), rng), random_frame(c.algebra, rng)));
        inst.put("y", random_element(c.algebra, rng));
        inst.put("seed", static_cast<double>(rng.next() >> 12));
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        const LinearMap& P = in.map("P");
        const Element& y = in.el("y");
        if (!is_doubly_stochastic(P, 1e-8, 32, static_cast<std::uint64_t>(in.num("seed")))) return -1.0;
        return majorization_slack(eigenvalues(y), eigenvalues(P(y))) / std::max(p_norm(y, kInf), kScaleFloor);
      });
  add(
      "positive-maps", "schur-spectral-radius", "schur-product-maps", std::nullopt, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        inst.put("A", random_psd_matrix(c.algebra->rank(), rng));
        inst.put("frame", frame_matrix(random_frame(c.algebra, rng)));
        inst.put("x", random_element(c.algebra, rng));
        return inst;
      },
      [](const Instance& in, const CheckContext& c) {
        const Matrix& A = in.mat("A");
        const Element& x = in.el("x");
        const Element y = schur_map(A, frame_of(in, c.algebra))(x);
        return relative_slack(p_norm(y, kInf), p_norm(x, kInf) * A.diagonal().cwiseAbs().maxCoeff());
      });
  add(
      "positive-maps", "z-map-inverse", "z-transformation-inverse", std::nullopt, 1, 10, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        const Element a = random_element(c.algebra, rng);
        const LinearMap P = quad_rep(random_element(c.algebra, rng));
        const double shift = 1.0 + p_norm(a, kInf) + P.coeffs().norm();
        inst.put("L", lyapunov_of(a) + shift * LinearMap::identity(c.algebra) - P);
        inst.put("seed", static_cast<double>(rng.next() >> 12));
        return inst;
      },
      [](const Instance& in, const CheckContext& c) {
        const LinearMap& L = in.map("L");
        const auto seed = static_cast<std::uint64_t>(in.num("seed"));
        const double z = z_property_check(L, 16, seed, c.tol).worst;
        const double pos = is_positive(invert(L), 16, seed + 1, c.tol).worst;
        return std::min({0.0, z, pos});
      });
  add("positive-maps", "norm-bound", "positive-map-norm-bound", std::nullopt, 1, 50, any, positive_instance,
      [](const Instance& in, const CheckContext&) {
        const LinearMap& P = in.map("P");
        double worst = kInf;
        for (double p : {1.0, 1.5, 2.0, 3.0, kInf})
          worst = std::min(worst, relative_slack(op_norm_estimate(P, p, p, 60, static_cast<std::uint64_t>(in.num("seed"))),
                                                 interpolated_positive_bound(P, p)));
        return worst;
      });

  // pa-majorization --------------------------------------------------------
  add("pa-majorization", "chain", "quadratic-representation-majorization", 1e-8, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        inst.put("a", random_element(c.algebra, rng));
        inst.put("x", random_element(c.algebra, rng));
        return inst;
      },
      [](const Instance& in, const CheckContext& c) {
        double worst = kInf;
        for (double p : c.p_list)
          for (const NamedGap& g : verify_pa_majorization(in.el("a"), in.el("x"), p)) worst = std::min(worst, g.gap);
        return worst;
      });
  add(
      "pa-majorization", "shifted-norms", "quadratic-representation-consequences", 1e-8, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        inst.put("a", random_element(c.algebra, rng, Distribution::Psd));
        inst.put("x", random_element(c.algebra, rng));
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        double worst = kInf;
        for (double p : {2.0, kInf})
          for (double mu : {-1.0, 0.0, 0.3, 2.0})
            for (const NamedGap& g : verify_pa_majorization(in.el("a"), in.el("x"), p, mu)) worst = std::min(worst, g.gap);
        return worst;
      });

  // operator-norms ---------------------------------------------------------
  const auto tagged_gen = [](Rng& rng, const CheckContext& c, long) {
    Instance inst;
    tagged_instance(inst, rng, c.algebra);
    return inst;
  };
  add("operator-norms", "estimate-matches-closed", "operator-norm-formulas", 1e-6, 1, 1, any, tagged_gen,
      [](const Instance& in, const CheckContext& c) {
        double worst = 0.0;
        const auto seed = static_cast<std::uint64_t>(in.num("seed"));
        for (const LinearMap& T : tagged_maps(in, c.algebra))
          for (auto [r, s] : exponent_pairs(c.p_list))
            if (const auto closed = try_op_norm_closed(T, r, s))
              worst = std::max(worst, rel_diff(op_norm_estimate(T, r, s, 40, seed), *closed));
        return -worst;
      });
  add("operator-norms", "sampling-below-closed", "operator-norm-formulas", 1e-9, 1, 1, any, tagged_gen,
      [](const Instance& in, const CheckContext& c) {
        double worst = kInf;
        Rng rng = instance_rng(in);
        for (const LinearMap& T : tagged_maps(in, c.algebra))
          for (auto [r, s] : exponent_pairs(c.p_list))
            if (const auto closed = try_op_norm_closed(T, r, s))
              for (int k = 0; k < 8; ++k) {
                const Element x = k % 2 ? random_primitive(c.algebra, rng) : random_element(c.algebra, rng);
                worst = std::min(worst, relative_slack(p_norm(T(x), s) / p_norm(x, r), *closed));
              }
        return worst;
      });
  add("operator-norms", "adjoint-duality", "operator-norm-duality", 1e-6, 1, 1, any, tagged_gen,
      [](const Instance& in, const CheckContext& c) {
        double worst = 0.0;
        const auto seed = static_cast<std::uint64_t>(in.num("seed"));
        for (const LinearMap& T : tagged_maps(in, c.algebra)) {
          const LinearMap Ts = adjoint(T);
          for (auto [r, s] : exponent_pairs(c.p_list))
            if (try_op_norm_closed(T, r, s))
              worst = std::max(worst, rel_diff(op_norm_estimate(T, r, s, 40, seed),
                                               op_norm_estimate(Ts, conjugate(s), conjugate(r), 40, seed)));
        }
        return -worst;
      });
  add("operator-norms", "lower-bounds", "operator-norm-lower-bounds", 1e-9, 1, 1, any, tagged_gen,
      [](const Instance& in, const CheckContext& c) {
        const Element& a = in.el("a");
        const double m = p_norm(a, kInf);
        const auto seed = static_cast<std::uint64_t>(in.num("seed"));
        double worst = kInf;
        for (auto [r, s] : exponent_pairs(c.p_list)) {
          worst = std::min(worst, relative_slack(m, op_norm_estimate(lyapunov_of(a), r, s, 10, seed)));
          worst = std::min(worst, relative_slack(m * m, op_norm_estimate(quad_rep(a), r, s, 10, seed)));
        }
        return worst;
      });

  // interpolation ----------------------------------------------------------
  const auto k_instance = [](Rng& rng, const CheckContext& c, long) {
    Instance inst;
    const std::size_t m = c.p_list.size();
    inst.put("x", random_element(c.algebra, rng));
    inst.put("t", std::exp(rng.uniform(-3.0, 3.0)));
    inst.put("r", c.p_list[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(m) - 1))]);
    inst.put("s", c.p_list[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(m) - 1))]);
    inst.put("seed", static_cast<double>(rng.next() >> 12));
    return inst;
  };
  add("interpolation", "k-dual-path", "k-functional-spectral-reduction", 1e-6, 1, 1, any, k_instance,
      [](const Instance& in, const CheckContext&) {
        const double t = in.num("t"), r = in.num("r"), s = in.num("s");
        const Element& x = in.el("x");
        return -rel_diff(k_v(t, x, r, s), k_v_direct(t, x, r, s, 8, static_cast<std::uint64_t>(in.num("seed"))));
      });
  add("interpolation", "k-closed-form", "k-functional-closed-form", 1e-8, 1, 1, any, k_instance,
      [](const Instance& in, const CheckContext&) {
        const Vector f = eigenvalues(in.el("x"));
        const double t = in.num("t");
        return -rel_diff(k_lp(t, f, 1.0, kInf), k_l1_linf_closed(t, f));
      });
  add("interpolation", "k-properties", "k-functional-properties", 1e-8, 1, 1, any, k_instance,
      [](const Instance& in, const CheckContext&) {
        const Vector f = eigenvalues(in.el("x"));
        const double t = in.num("t"), r = in.num("r"), s = in.num("s");
        const double k1 = k_lp(t, f, r, s), k2 = k_lp(2.0 * t, f, r, s), kmid = k_lp(1.5 * t, f, r, s);
        const double bound = std::min(vector_p_norm(f, r), t * vector_p_norm(f, s));
        return std::min({relative_slack(k1, k2), relative_slack(0.5 * (k1 + k2), kmid), relative_slack(k1, bound),
                         -rel_diff(k_lp(t, 2.0 * f, r, s), 2.0 * k1)});
      });
  add(
      "interpolation", "norm-recovery", "k-method-norm-recovery", 1e-3, 1, 50, any,
      [](Rng& rng, const CheckContext& c, long trial) {
        Instance inst;
        inst.put("f", Matrix(eigenvalues(random_element(c.algebra, rng))));
        inst.put("triple", static_cast<double>(trial % 3));
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        const Triple tr = kTriples[static_cast<int>(in.num("triple"))];
        const double p = interpolated_exponent(tr.r, tr.s, tr.theta);
        const Vector f = in.mat("f").col(0);
        const auto N = [&](const Vector& g) { return pnorm_via_k(g, tr.r, tr.s, tr.theta); };
        const double base = N(f);
        double worst = std::max(rel_diff(N(2.0 * f) / base, 2.0), rel_diff(N(-f.reverse().eval()) / base, 1.0));
        const int n = static_cast<int>(f.size());
        Vector ind = Vector::Zero(n);
        ind[0] = 1.0;
        const double one = N(ind);
        for (int m = 2; m <= n; ++m) {
          ind.head(m).setOnes();
          worst = std::max(worst, rel_diff(N(ind) / one, std::pow(m, 1.0 / p)));
        }
        return -worst;
      });
  add(
      "interpolation", "norm-gap", "operator-norm-interpolation", 1e-6, 1, 1, any,
      [](Rng& rng, const CheckContext& c, long) {
        Instance inst;
        inst.put("T", LinearMap(c.algebra, rng.gaussian_matrix(c.algebra->dim(), c.algebra->dim())));
        inst.put("seed", static_cast<double>(rng.next() >> 12));
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        const LinearMap& T = in.map("T");
        const auto seed = static_cast<std::uint64_t>(in.num("seed"));
        std::map<double, double> norms;
        const auto M = [&](double p) {
          auto it = norms.find(p);
          if (it == norms.end()) it = norms.emplace(p, operator_norm(T, p, 300, seed).first).first;
          return it->second;
        };
        double worst = kInf;
        for (const Triple& tr : kTriples) {
          const double bound = std::pow(M(tr.r), 1.0 - tr.theta) * std::pow(M(tr.s), tr.theta);
          worst = std::min(worst, relative_slack(M(interpolated_exponent(tr.r, tr.s, tr.theta)), bound));
        }
        return worst;
      });
  add(
      "interpolation", "pointwise-bound", "interpolation-pointwise-bound", 1e-6, 1, 4, any,
      [](Rng& rng, const CheckContext& c, long trial) {
        Instance inst;
        const Element a = random_element(c.algebra, rng);
        inst.put("T", trial % 2 == 0 ? lyapunov_of(a) : quad_rep(a));
        inst.put("triple", static_cast<double>((trial / 2) % 3));
        inst.put("seed", static_cast<double>(rng.next() >> 12));
        return inst;
      },
      [](const Instance& in, const CheckContext&) {
        const Triple tr = kTriples[static_cast<int>(in.num("triple"))];
        const InterpolationReport rep = verify_interpolation(in.map("T"), tr.r, tr.s, tr.theta, 4,
                                                             static_cast<std::uint64_t>(in.num("seed")), 40);
        if (!rep.pointwise_checked) return -1.0;
        return std::min(rep.pointwise_worst, rep.gap);
      });
  add("interpolation", "eigenvalue-split", "eigenvalue-sum-majorization", 1e-7, 1, 1, any, pair_of,
      [](const Instance& in, const CheckContext&) {
        const Element &a = in.el("x"), &b = in.el("y");
        const MajorizationSplit split = majorization_split(a, b);
        if (!is_doubly_stochastic_matrix(split.A, 1e-10) || !is_doubly_stochastic_matrix(split.B, 1e-10)) return -1.0;
        const Vector target = eigenvalues(a + b);
        const Vector combo = split.A * eigenvalues(a) + split.B * eigenvalues(b);
        return -(combo - target).norm() / std::max(1.0, target.norm());
      });

  // appendix -------------------------------------------------------------------
  const auto invertible = [](Rng& rng, const CheckContext& c, long) {
    Instance inst;
    inst.put("a", random_element(c.algebra, rng, Distribution::Invertible));
    inst.put("u", random_element(c.algebra, rng));
    inst.put("seed", static_cast<double>(rng.next() >> 12));
    return inst;
  };
  add("appendix", "pair-identity", "appendix-pair-identity", 1e-9, 1, 1, any, invertible,
      [](const Instance& in, const CheckContext&) {
        const Element& a = in.el("a");
        const Matrix lhs = (quad_rep_pair(a, inverse_element(a)) * quad_rep(a)).coeffs();
        const Matrix rhs = lyapunov_of(square(a)).coeffs();
        return -(lhs - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff());
      });
  add("appendix", "inverse-doubly-stochastic", "appendix-doubly-stochastic", std::nullopt, 1, 1, any, invertible,
      [](const Instance& in, const CheckContext&) {
        const Element& a = in.el("a");
        const LinearMap inv = invert(quad_rep_pair(a, inverse_element(a)));
        return bool_gap(is_doubly_stochastic(inv, 1e-8, 32, static_cast<std::uint64_t>(in.num("seed"))));
      });
  add("appendix", "gram-psd", "appendix-gram", 1e-10, 1, 1, any, invertible, [](const Instance& in, const CheckContext&) {
    const SymmetricEigen eig = jacobi_eigen(appendix_gram(in.el("a")));
    return std::min(0.0, eig.values.minCoeff());
  });
  add("appendix", "peirce-scaling", "appendix-peirce-scaling", 1e-9, 1, 1, any, invertible,
      [](const Instance& in, const CheckContext&) {
        const Element &a = in.el("a"), &u = in.el("u");
        const SpectralDecomposition sd = spectral_decompose(a);
        const PeirceComponents pc = frame_peirce_components(sd.frame, u);
        const Vector& l = sd.eigenvalues;
        Element expected = Element::zero(a.algebra_ptr());
        for (int i = 0; i < l.size(); ++i)
          for (int j = i; j < l.size(); ++j) expected += (2 * l[i] * l[j] / (l[i] * l[i] + l[j] * l[j])) * pc.at(i, j);
        const Element got = invert(quad_rep_pair(a, inverse_element(a)))(u);
        return -trace_norm2(got - expected) / std::max(trace_norm2(u), kScaleFloor);
      });
  return out;
}

inline const std::vector<Check>& check_registry() {
  static const std::vector<Check> checks = build_checks();
  return checks;
}

inline const Check& find_check(const std::string& name) {
  for (const Check& c : check_registry())
    if (c.name == name) return c;
  throw config_error("unknown check: " + name);
}

// ---------------------------------------------------------------------------
// Running

inline json p_list_to_json(const std::vector<double>& ps) {
  json out = json::array();
  for (double p : ps) out.push_back(number_to_json(p));
  return out;
}

inline std::vector<double> p_list_from_json(const json& j) {
  std::vector<double> out;
  for (const json& v : j) out.push_back(number_from_json(v));
  return out;
}

inline json make_witness(const Check& check, const SuiteConfig& cfg, long trial, double gap, const json& instance,
                         const std::string& error) {
  json w = {{"schema", kWitnessSchema}, {"check", check.name},    {"algebra", cfg.algebra},
            {"seed", cfg.seed},         {"trial", trial},         {"tolerance", number_to_json(check.tol({nullptr, {}, cfg.tol}))},
            {"gap", number_to_json(gap)}, {"p_list", p_list_to_json(cfg.p_list)}, {"instance", instance}};
  if (!error.empty()) w["error"] = error;
  return w;
}

struct TrialOutcome {
  double gap = 0.0;
  bool violated = false;
  json instance;  // only kept for violations
  std::string error;
};

inline TrialOutcome run_trial(const Check& check, const CheckContext& ctx, const SuiteConfig& cfg, long trial) {
  TrialOutcome out;
  Rng rng = Rng::keyed(cfg.seed, check.name, cfg.algebra, static_cast<std::uint64_t>(trial));
  std::optional<Instance> inst;
  try {
    inst = check.generate(rng, ctx, trial);
    out.gap = check.evaluate(*inst, ctx);
    if (std::isnan(out.gap)) out.gap = -kInf;
  } catch (const std::exception& e) {
    out.gap = -kInf;
    out.error = e.what();
  }
  out.violated = violates(out.gap, check.tol(ctx));
  if (out.violated && inst) out.instance = inst->to_json();
  return out;
}

inline CheckRecord run_check(const Check& check, const SuiteConfig& cfg) {
  const CheckContext ctx{parse_algebra(cfg.algebra), cfg.p_list, cfg.tol};
  const long n = check.trial_count(cfg.trials);
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(n));
  const int workers = static_cast<int>(std::min<long>(cfg.jobs, n));
  const auto work = [&](int w) {
    for (long i = w; i < n; i += workers) outcomes[static_cast<std::size_t>(i)] = run_trial(check, ctx, cfg, i);
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }

  CheckRecord rec{check.name, check.anchor, check.tol(ctx), n, kInf, -1, 0, std::nullopt};
  for (long i = 0; i < n; ++i) {
    TrialOutcome& o = outcomes[static_cast<std::size_t>(i)];
    if (o.gap < rec.worst_gap || rec.worst_trial < 0) {
      rec.worst_gap = o.gap;
      rec.worst_trial = i;
    }
    if (o.violated) {
      if (!rec.witness) rec.witness = make_witness(check, cfg, i, o.gap, o.instance, o.error);
      ++rec.violation_count;
    }
  }
  return rec;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline std::vector<const Check*> select_checks(const SuiteConfig& cfg) {
  const AlgebraPtr alg = parse_algebra(cfg.algebra);
  std::vector<const Check*> out;
  for (const Check& c : check_registry())
    if ((cfg.suite == "all" || c.suite == cfg.suite) && c.applies(*alg)) out.push_back(&c);
  return out;
}

inline Report run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  Report rep;
  rep.suite = cfg.suite;
  rep.algebra = parse_algebra(cfg.algebra)->spec();
  rep.trials = cfg.trials;
  rep.seed = cfg.seed;
  rep.tol = cfg.tol;
  rep.p_list = cfg.p_list;
  rep.started = utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  SuiteConfig normalized = cfg;
  normalized.algebra = rep.algebra;
  for (const Check* c : select_checks(normalized)) {
    rep.checks.push_back(run_check(*c, normalized));
    if (rep.checks.back().violation_count > 0) rep.pass = false;
  }
  rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline int exit_code(const Report& rep) { return rep.pass ? 0 : 1; }

// ---------------------------------------------------------------------------
// Emission and parsing

inline json record_to_json(const CheckRecord& r) {
  json j = {{"name", r.name},
            {"anchor", r.anchor},
            {"tolerance", number_to_json(r.tolerance)},
            {"trials", r.trials},
            {"worst_gap", number_to_json(r.worst_gap)},
            {"worst_trial", r.worst_trial},
            {"violation_count", r.violation_count}};
  if (r.witness) j["witness"] = *r.witness;
  return j;
}

inline CheckRecord record_from_json(const json& j) {
  CheckRecord r;
  r.name = j.at("name").get<std::string>();
  r.anchor = j.at("anchor").get<std::string>();
  r.tolerance = number_from_json(j.at("tolerance"));
  r.trials = j.at("trials").get<long>();
  r.worst_gap = number_from_json(j.at("worst_gap"));
  r.worst_trial = j.at("worst_trial").get<long>();
  r.violation_count = j.at("violation_count").get<long>();
  if (j.contains("witness")) r.witness = j.at("witness");
  return r;
}

inline json report_to_json(const Report& rep) {
  json checks = json::array();
  for (const CheckRecord& r : rep.checks) checks.push_back(record_to_json(r));
  return {{"schema", rep.schema},   {"suite", rep.suite},   {"algebra", rep.algebra},
          {"trials", rep.trials},   {"seed", rep.seed},     {"tol", number_to_json(rep.tol)},
          {"p_list", p_list_to_json(rep.p_list)},           {"started", rep.started},
          {"elapsed_seconds", rep.elapsed_seconds},         {"checks", checks},
          {"pass", rep.pass}};
}

inline Report parse_report(const json& j) {
  if (j.value("schema", "") != kReportSchema) throw parse_error("not an " + std::string(kReportSchema) + " document");
  Report rep;
  rep.suite = j.at("suite").get<std::string>();
  rep.algebra = j.at("algebra").get<std::string>();
  rep.trials = j.at("trials").get<long>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  rep.tol = number_from_json(j.at("tol"));
  rep.p_list = p_list_from_json(j.at("p_list"));
  rep.started = j.at("started").get<std::string>();
  rep.elapsed_seconds = j.at("elapsed_seconds").get<double>();
  for (const json& r : j.at("checks")) rep.checks.push_back(record_from_json(r));
  rep.pass = j.at("pass").get<bool>();
  return rep;
}

inline Report parse_report(const std::string& text) { return parse_report(json::parse(text)); }

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return number_to_json(x).get<std::string>();
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << x;
  return os.str();
}

inline std::string emit_report(const Report& rep, const std::string& format) {
  if (format == "json") return report_to_json(rep).dump(2) + "\n";
  if (format != "text") throw config_error("format must be json or text");
  std::ostringstream os;
  os << "suite " << rep.suite << " on " << rep.algebra << ", trials " << rep.trials << ", seed " << rep.seed << ", tol "
     << format_number(rep.tol) << "\n";
  std::map<std::string, std::vector<const CheckRecord*>> by_anchor;
  for (const CheckRecord& r : rep.checks) by_anchor[r.anchor].push_back(&r);
  for (const auto& [anchor, recs] : by_anchor) {
    os << anchor << "\n";
    for (const CheckRecord* r : recs)
      os << "  " << std::left << std::setw(44) << r->name << std::right << std::setw(7) << r->trials << "  worst "
         << std::setw(10) << format_number(r->worst_gap) << "  tol " << format_number(r->tolerance) << "  violations "
         << r->violation_count << "\n";
  }
  os << (rep.pass ? "PASS" : "FAIL") << " (" << std::fixed << std::setprecision(2) << rep.elapsed_seconds << " s)\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Replay

struct ReplayResult {
  std::string check;
  double gap = 0.0;
  double tolerance = 0.0;
  bool violated = false;
};

inline ReplayResult replay(const json& witness) {
  if (witness.value("schema", "") != kWitnessSchema) throw parse_error("not an " + std::string(kWitnessSchema) + " document");
  const Check& check = find_check(witness.at("check").get<std::string>());
  const CheckContext ctx{parse_algebra(witness.at("algebra").get<std::string>()), p_list_from_json(witness.at("p_list")),
                         number_from_json(witness.at("tolerance"))};
  ReplayResult out{check.name, 0.0, number_from_json(witness.at("tolerance")), false};
  const Instance inst = Instance::from_json(witness.at("instance"));
  try {
    out.gap = check.evaluate(inst, ctx);
  } catch (const std::out_of_range&) {
    throw parse_error("witness instance does not fit check " + check.name);
  } catch (const std::exception&) {
    out.gap = -kInf;
  }
  if (std::isnan(out.gap)) out.gap = -kInf;
  out.violated = violates(out.gap, out.tolerance);
  return out;
}

}  // namespace eja
