#include "eja/norms.hpp"
#include "eja/operators.hpp"
#include "eja/random.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

using namespace eja;

namespace {

const char* kSpecs[] = {"rn:4", "spin:5", "sym:3", "rn:1+spin:3+sym:2"};

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Element vec(const AlgebraPtr& alg, std::initializer_list<double> v) {
  Vector c(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) c[i++] = x;
  return Element(alg, c);
}

Matrix mat(int n, std::initializer_list<double> v) {
  Matrix m(n, n);
  auto it = v.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = *it++;
  return m;
}

}  // namespace

TEST(LinearMap, LinearityAndAdjoint) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(1, "lin", spec, 0);
    const LinearMap T(alg, rng.gaussian_matrix(alg->dim(), alg->dim()));
    const LinearMap Ts = adjoint(T);
    for (int t = 0; t < 20; ++t) {
      const Element x = random_element(alg, rng), y = random_element(alg, rng);
      const double a = rng.gaussian(), b = rng.gaussian();
      EXPECT_LT(trace_norm2(T(a * x + b * y) - (a * T(x) + b * T(y))), 1e-12 * (1 + trace_norm2(x) + trace_norm2(y)) * 10);
      const double scale = trace_norm2(T(x)) * trace_norm2(y) + trace_norm2(x) * trace_norm2(Ts(y));
      EXPECT_LE(std::abs(inner(T(x), y) - inner(x, Ts(y))), 1e-10 * scale) << spec;
    }
    EXPECT_EQ(adjoint(Ts).coeffs(), T.coeffs());
  }
}

TEST(Lyapunov, Examples) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    EXPECT_LT(max_abs(lyapunov_of(unit(alg)).coeffs() - Matrix::Identity(alg->dim(), alg->dim())), 1e-15);
    const Element a = random_element(alg, 3);
    const LinearMap L = lyapunov_of(a);
    EXPECT_LT(max_abs(L.coeffs() - L.coeffs().transpose()), 1e-14);
    const SpectralDecomposition sd = spectral_decompose(a);
    for (int i = 0; i < alg->rank(); ++i) {
      const Element& c = sd.frame[static_cast<std::size_t>(i)];
      EXPECT_LT(trace_norm2(L(c) - sd.eigenvalues[i] * c), 1e-12);
    }
  }
  auto r2 = parse_algebra("rn:2");
  EXPECT_EQ(lyapunov_of(vec(r2, {2, -3})).coeffs(), mat(2, {2, 0, 0, -3}));
}

TEST(QuadRep, Examples) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    EXPECT_LT(max_abs(quad_rep(unit(alg)).coeffs() - Matrix::Identity(alg->dim(), alg->dim())), 1e-14);
    const Element a = random_element(alg, 4);
    const LinearMap P = quad_rep(a);
    EXPECT_LT(max_abs(P.coeffs() - P.coeffs().transpose()), 1e-13);
    EXPECT_LT(trace_norm2(P(unit(alg)) - square(a)), 1e-13);
    const SpectralDecomposition sd = spectral_decompose(a);
    for (int i = 0; i < alg->rank(); ++i) {
      const Element& c = sd.frame[static_cast<std::size_t>(i)];
      EXPECT_LT(trace_norm2(P(c) - sd.eigenvalues[i] * sd.eigenvalues[i] * c), 1e-12);
    }
    EXPECT_TRUE(is_positive(P, 50, 1).pass) << spec;
  }
  auto s2 = parse_algebra("sym:2");
  const Matrix A = mat(2, {1, 0, 0, 2});
  const Matrix X = mat(2, {0, 1, 1, 0});
  const Element out = quad_rep(sym_element(s2, A))(sym_element(s2, X));
  EXPECT_LT(max_abs(to_matrix(out) - A * X * A), 1e-14);
  EXPECT_LT(max_abs(to_matrix(out) - mat(2, {0, 2, 2, 0})), 1e-14);
}

TEST(QuadRep, SymIsCongruenceByA) {
  auto alg = parse_algebra("sym:4");
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    const Element a = random_element(alg, rng), x = random_element(alg, rng);
    const Matrix A = to_matrix(a);
    EXPECT_LT(max_abs(to_matrix(quad_rep(a)(x)) - A * to_matrix(x) * A), 1e-12);
  }
}

TEST(QuadRepPair, Identities) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(2, "pair", spec, 0);
    const Element a = random_element(alg, rng), b = random_element(alg, rng);
    EXPECT_LT(max_abs(quad_rep_pair(a, a).coeffs() - quad_rep(a).coeffs()), 1e-12);
    EXPECT_LT(max_abs(quad_rep_pair(unit(alg), b).coeffs() - lyapunov_of(b).coeffs()), 1e-12);
    const Element c = random_element(alg, rng, Distribution::Invertible);
    const Matrix lhs = (quad_rep_pair(c, inverse_element(c)) * quad_rep(c)).coeffs();
    const Matrix rhs = lyapunov_of(square(c)).coeffs();
    EXPECT_LE(max_abs(lhs - rhs), 1e-9 * std::max(1.0, max_abs(rhs))) << spec;
  }
  EXPECT_THROW(quad_rep_pair(unit(parse_algebra("rn:2")), unit(parse_algebra("rn:3"))), mismatch_error);
}

TEST(Schur, Examples) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(3, "schur", spec, 0);
    const int n = alg->rank();
    const std::vector<Element> frame = random_frame(alg, rng);
    const LinearMap ones = schur_map(Matrix::Ones(n, n), frame);
    EXPECT_LT(max_abs(ones.coeffs() - Matrix::Identity(alg->dim(), alg->dim())), 1e-10) << spec;

    const LinearMap diag = schur_map(Matrix::Identity(n, n), frame);
    const Element x = random_element(alg, rng);
    Element expected = Element::zero(alg);
    for (const Element& c : frame) {
      // x_ii = <x, c> c for primitive c in a Jordan frame
      expected += inner(x, c) * c;
    }
    EXPECT_LT(trace_norm2(diag(x) - expected), 1e-10) << spec;

    const Matrix corr = random_correlation(n, rng);
    EXPECT_TRUE(is_doubly_stochastic(schur_map(corr, frame))) << spec;
  }
  auto alg = parse_algebra("sym:3");
  const std::vector<Element> frame = spectral_decompose(unit(alg)).frame;
  EXPECT_THROW(schur_map(Matrix::Ones(2, 2), frame), mismatch_error);
  EXPECT_THROW(schur_map(mat(3, {1, 2, 0, 0, 1, 0, 0, 0, 1}), frame), domain_error);
}

TEST(Schur, SymStandardFrameIsHadamard) {
  auto alg = parse_algebra("sym:3");
  const std::vector<Element> frame = spectral_decompose(sym_element(alg, Vector(Vector::LinSpaced(3, 3, 1)).asDiagonal().toDenseMatrix())).frame;
  Rng rng(5);
  const Matrix g = rng.gaussian_matrix(3, 3);
  const Matrix A = g + g.transpose();
  const Element x = random_element(alg, rng);
  EXPECT_LT(max_abs(to_matrix(schur_map(A, frame)(x)) - A.cwiseProduct(to_matrix(x))), 1e-12);
}

TEST(Congruence, Examples) {
  auto alg = parse_algebra("sym:3");
  EXPECT_LT(max_abs(congruence_map(alg, Matrix::Identity(3, 3)).coeffs() - Matrix::Identity(6, 6)), 1e-14);
  Rng rng(6);
  const Matrix Q = Eigen::HouseholderQR<Matrix>(rng.gaussian_matrix(3, 3)).householderQ();
  const LinearMap C = congruence_map(alg, Q);
  const Element x = random_element(alg, rng);
  EXPECT_LT((eigenvalues(C(x)) - eigenvalues(x)).cwiseAbs().maxCoeff(), 1e-12);

  const Matrix M = rng.gaussian_matrix(3, 3);
  const LinearMap P = congruence_map(alg, M);
  EXPECT_LT(max_abs(adjoint(P).coeffs() - congruence_map(alg, M.transpose()).coeffs()), 1e-12);
  EXPECT_EQ(adjoint(P).tag().matrix, M.transpose());
  EXPECT_LT(max_abs(to_matrix(P(x)) - M * to_matrix(x) * M.transpose()), 1e-12);
  EXPECT_TRUE(is_positive(P, 100, 2).pass);
  EXPECT_TRUE(is_positive(adjoint(P), 100, 3).pass);
  EXPECT_THROW(congruence_map(parse_algebra("rn:3"), M), mismatch_error);
  EXPECT_THROW(congruence_map(alg, Matrix::Identity(2, 2)), mismatch_error);
}

TEST(MatrixLyapunov, Examples) {
  auto alg = parse_algebra("sym:3");
  EXPECT_LT(max_abs(matrix_lyapunov_map(alg, Matrix::Identity(3, 3)).coeffs() - 2.0 * Matrix::Identity(6, 6)), 1e-14);
  const Vector d = (Vector(3) << 1.0, -2.0, 0.5).finished();
  const LinearMap L = matrix_lyapunov_map(alg, d.asDiagonal().toDenseMatrix());
  const Element x = random_element(alg, 3);
  const Matrix X = to_matrix(x);
  const Matrix Y = to_matrix(L(x));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(Y(i, j), (d[i] + d[j]) * X(i, j), 1e-13);

  // positive stable diag(1,2): invertible with positive inverse, Z-map
  auto s2 = parse_algebra("sym:2");
  const LinearMap S = matrix_lyapunov_map(s2, mat(2, {1, 0, 0, 2}));
  EXPECT_TRUE(z_property_check(S, 200, 1).pass);
  EXPECT_TRUE(is_positive(invert(S), 200, 1).pass);
}

TEST(MatrixLyapunov, PositiveStableHasPositiveInverse) {
  auto alg = parse_algebra("sym:3");
  Rng rng(8);
  const Matrix B = rng.gaussian_matrix(3, 3);
  const Matrix A = B - B.transpose() + 4.0 * Matrix::Identity(3, 3);
  const LinearMap L = matrix_lyapunov_map(alg, A);
  // orthogonal PSD X, Y have XY = 0, so <AX + XA^T, Y> = 2 tr(AXY) = 0
  EXPECT_TRUE(z_property_check(L, 300, 2).pass);
  EXPECT_TRUE(is_positive(invert(L), 300, 3).pass);
}

TEST(Adjoint, PositiveStaysPositive) {
  auto alg = parse_algebra("sym:3");
  Rng rng(10);
  for (int t = 0; t < 5; ++t) {
    const LinearMap P = quad_rep(random_element(alg, rng)) + congruence_map(alg, rng.gaussian_matrix(3, 3));
    EXPECT_TRUE(is_positive(P, 60, 1).pass);
    EXPECT_TRUE(is_positive(adjoint(P), 60, 2).pass);
  }
}

TEST(IsPositive, Counterexample) {
  auto alg = parse_algebra("rn:2");
  EXPECT_TRUE(is_positive(LinearMap::identity(alg), 10, 0).pass);
  const LinearMap T(alg, mat(2, {1, 0, -2, 1}));
  const CheckOutcome out = is_positive(T, 10, 0);
  EXPECT_FALSE(out.pass);
  ASSERT_TRUE(out.counterexample.has_value());
  EXPECT_LT(eigenvalues(T(*out.counterexample)).minCoeff(), 0.0);
  EXPECT_THROW(is_positive(T, 0, 0), std::invalid_argument);
}

TEST(DoublyStochastic, Examples) {
  auto alg = parse_algebra("sym:3");
  EXPECT_TRUE(is_doubly_stochastic(LinearMap::identity(alg)));
  const Element a = 2.0 * unit(alg) + 0.3 * random_element(alg, 1);
  EXPECT_FALSE(is_doubly_stochastic(quad_rep(a)));
  for (const char* spec : {"sym:4", "spin:6", "rn:3+sym:2"}) {
    auto al = parse_algebra(spec);
    const Element c = random_element(al, 5, Distribution::Invertible);
    EXPECT_TRUE(is_doubly_stochastic(invert(quad_rep_pair(c, inverse_element(c))))) << spec;
  }
}

TEST(DoublyStochastic, MajorizesImage) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(4, "ds", spec, 0);
    const std::vector<Element> frame = random_frame(alg, rng);
    const LinearMap P = schur_map(random_correlation(alg->rank(), rng), frame);
    for (int t = 0; t < 50; ++t) {
      const Element y = random_element(alg, rng);
      EXPECT_TRUE(majorizes(eigenvalues(y), eigenvalues(P(y)))) << spec;
    }
  }
}

TEST(Invert, Examples) {
  auto alg = parse_algebra("rn:3");
  EXPECT_LT(max_abs(invert(LinearMap::identity(alg)).coeffs() - Matrix::Identity(3, 3)), 1e-15);
  const Element a = vec(alg, {2, -4, 0.5});
  EXPECT_LT(max_abs(invert(lyapunov_of(a)).coeffs() - lyapunov_of(inverse_element(a)).coeffs()), 1e-15);
  EXPECT_THROW(invert(lyapunov_of(vec(alg, {1, 0, 1}))), singular_error);
  EXPECT_THROW(invert(lyapunov_of(vec(alg, {1, 1e-14, 1}))), singular_error);
  for (const char* spec : kSpecs) {
    auto al = parse_algebra(spec);
    const LinearMap T(al, Rng(3).gaussian_matrix(al->dim(), al->dim()));
    EXPECT_LT(max_abs((T * invert(T)).coeffs() - Matrix::Identity(al->dim(), al->dim())), 1e-8);
  }
}

TEST(Invert, AppendixScaling) {
  for (const char* spec : {"sym:4", "spin:6", "rn:2+sym:3"}) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(5, "appendix", spec, 0);
    const Element a = random_element(alg, rng, Distribution::Invertible);
    const SpectralDecomposition sd = spectral_decompose(a);
    const LinearMap inv = invert(quad_rep_pair(a, inverse_element(a)));
    const Element u = random_element(alg, rng);
    const PeirceComponents pc = frame_peirce_components(sd.frame, u);
    Element expected = Element::zero(alg);
    const Vector& l = sd.eigenvalues;
    for (int i = 0; i < alg->rank(); ++i)
      for (int j = i; j < alg->rank(); ++j) expected += (2 * l[i] * l[j] / (l[i] * l[i] + l[j] * l[j])) * pc.at(i, j);
    EXPECT_LT(trace_norm2(inv(u) - expected), 1e-9 * trace_norm2(u)) << spec;
  }
}

TEST(ZProperty, Examples) {
  auto r2 = parse_algebra("rn:2");
  EXPECT_TRUE(z_property_check(-1.0 * LinearMap::identity(r2), 50, 0).pass);
  EXPECT_TRUE(z_property_check(LinearMap(r2, mat(2, {1, -1, -1, 1})), 50, 0).pass);
  const CheckOutcome bad = z_property_check(LinearMap(r2, mat(2, {1, 1, 1, 1})), 50, 0);
  EXPECT_FALSE(bad.pass);
  ASSERT_TRUE(bad.counterexample && bad.partner);
  EXPECT_NEAR(inner(*bad.counterexample, *bad.partner), 0.0, 1e-15);
  EXPECT_GT(inner(LinearMap(r2, mat(2, {1, 1, 1, 1}))(*bad.counterexample), *bad.partner), 0.0);
}

TEST(ZProperty, LyapunovMinusPositiveInverseIsPositive) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(6, "zmap", spec, 0);
    // L_a + cI - P with P positive is a Z-map, positive stable once c is large
    const Element a = random_element(alg, rng);
    const LinearMap P = quad_rep(random_element(alg, rng));
    const double c = 1.0 + p_norm(a, kInf) + P.coeffs().norm();
    const LinearMap L = lyapunov_of(a) + c * LinearMap::identity(alg) - P;
    EXPECT_TRUE(z_property_check(L, 200, 1).pass) << spec;
    EXPECT_TRUE(is_positive(invert(L), 200, 2).pass) << spec;
  }
}

TEST(AppendixGram, Examples) {
  auto alg = parse_algebra("rn:2");
  const Matrix A = appendix_gram(vec(alg, {1, 2}));
  EXPECT_LT(max_abs(A - mat(2, {1, 0.8, 0.8, 1})), 1e-15);
  auto s4 = parse_algebra("sym:4");
  EXPECT_LT(max_abs(appendix_gram(unit(s4)) - Matrix::Ones(4, 4)), 1e-15);
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Matrix G = appendix_gram(random_element(s4, rng, Distribution::Invertible));
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(G).eigenvalues().minCoeff(), -1e-10);
    EXPECT_LT((G.diagonal() - Vector::Ones(4)).cwiseAbs().maxCoeff(), 1e-15);
  }
  EXPECT_THROW(appendix_gram(vec(alg, {1, 0})), domain_error);
}
