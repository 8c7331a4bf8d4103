#include "eja/algebra.hpp"
#include "eja/jacobi.hpp"
#include "eja/norms.hpp"
#include "eja/random.hpp"
#include "eja/spectral.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace eja;

namespace {

Element rn(const AlgebraPtr& alg, std::initializer_list<double> v) {
  Vector c(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) c[i++] = x;
  return Element(alg, c);
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

const char* kSpecs[] = {"rn:5", "spin:4", "sym:3", "sym:4", "rn:2+spin:3+sym:3"};

}  // namespace

TEST(Parse, RankAndDim) {
  auto a = parse_algebra("rn:5");
  EXPECT_EQ(a->rank(), 5);
  EXPECT_EQ(a->dim(), 5);
  auto b = parse_algebra("spin:4");
  EXPECT_EQ(b->rank(), 2);
  EXPECT_EQ(b->dim(), 4);
  auto c = parse_algebra("rn:2+sym:3");
  EXPECT_EQ(c->rank(), 5);
  EXPECT_EQ(c->dim(), 8);
  EXPECT_EQ(c->spec(), "rn:2+sym:3");
}

TEST(Parse, Rejects) {
  EXPECT_THROW(parse_algebra(""), parse_error);
  EXPECT_THROW(parse_algebra("rn"), parse_error);
  EXPECT_THROW(parse_algebra("rn:x"), parse_error);
  EXPECT_THROW(parse_algebra("foo:3"), parse_error);
  EXPECT_THROW(parse_algebra("rn:2+"), parse_error);
  EXPECT_THROW(parse_algebra("spin:1"), domain_error);
  EXPECT_THROW(parse_algebra("rn:0"), std::exception);
}

TEST(Unit, EigenvaluesAndNorm) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    const Element e = unit(alg);
    const Vector lam = eigenvalues(e);
    EXPECT_LT((lam - Vector::Ones(alg->rank())).cwiseAbs().maxCoeff(), 1e-14) << spec;
    EXPECT_NEAR(inner(e, e), alg->rank(), 1e-12) << spec;
  }
}

TEST(Product, Rn) {
  auto alg = parse_algebra("rn:2");
  const Element z = jordan_product(rn(alg, {1, 2}), rn(alg, {3, 4}));
  EXPECT_DOUBLE_EQ(z.coords()[0], 3);
  EXPECT_DOUBLE_EQ(z.coords()[1], 8);
}

TEST(Product, Spin) {
  auto alg = parse_algebra("spin:3");
  const Element z = jordan_product(rn(alg, {1, 1, 0}), rn(alg, {1, 0, 1}));
  // (x0 y0 + <xb,yb>, x0 yb + y0 xb)
  EXPECT_NEAR(z.coords()[0], 1.0 * 1.0 + 0.0, 1e-15);
  EXPECT_NEAR(z.coords()[1], 1.0, 1e-15);
  EXPECT_NEAR(z.coords()[2], 1.0, 1e-15);
}

TEST(Product, SymAnticommuting) {
  auto alg = parse_algebra("sym:2");
  const Element x = sym_element(alg, mat2(0, 1, 1, 0));
  const Element y = sym_element(alg, mat2(1, 0, 0, -1));
  EXPECT_LT(jordan_product(x, y).coords().cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Product, SymMatchesMatrixFormula) {
  auto alg = parse_algebra("sym:4");
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Element x = random_element(alg, rng);
    const Element y = random_element(alg, rng);
    const Matrix X = to_matrix(x), Y = to_matrix(y);
    const Matrix expected = 0.5 * (X * Y + Y * X);
    EXPECT_LT((to_matrix(jordan_product(x, y)) - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(inner(x, y), (X * Y).trace(), 1e-12);
  }
}

TEST(Product, MismatchThrows) {
  const Element x = unit(parse_algebra("rn:2"));
  const Element y = unit(parse_algebra("rn:3"));
  EXPECT_THROW(jordan_product(x, y), mismatch_error);
  EXPECT_THROW(inner(x, y), mismatch_error);
}

TEST(Inner, Examples) {
  EXPECT_DOUBLE_EQ(inner(rn(parse_algebra("rn:2"), {1, 2}), rn(parse_algebra("rn:2"), {3, -1})), 1.0);
  auto spin = parse_algebra("spin:3");
  const Element x = rn(spin, {1, 0, 0});
  const Element y = rn(spin, {1, 1, 0});
  EXPECT_NEAR(inner(x, y), 2.0, 1e-15);
  // trace of x o y through its eigenvalues
  EXPECT_NEAR(eigenvalues(jordan_product(x, y)).sum(), 2.0, 1e-14);
  auto sym = parse_algebra("sym:2");
  EXPECT_NEAR(inner(unit(sym), sym_element(sym, mat2(2, 0, 0, 3))), 5.0, 1e-14);
}

TEST(Element, SymRejectsAsymmetric) {
  auto sym = parse_algebra("sym:2");
  EXPECT_THROW(sym_element(sym, mat2(1, 2, 3, 4)), domain_error);
}

TEST(Element, CoordsLengthChecked) {
  EXPECT_THROW(Element(parse_algebra("rn:3"), Vector::Zero(2)), std::exception);
}

TEST(Properties, TraceAssociativityAndJordanIdentity) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(11, "assoc", spec, 0);
    for (int t = 0; t < 200; ++t) {
      const Element x = random_element(alg, rng), y = random_element(alg, rng), z = random_element(alg, rng);
      const double scale = trace_norm2(x) * trace_norm2(y) * trace_norm2(z);
      EXPECT_LE(std::abs(inner(jordan_product(x, y), z) - inner(x, jordan_product(y, z))), 1e-10 * scale);
      const Element x2 = square(x);
      const Element lhs = jordan_product(x2, jordan_product(x, y));
      const Element rhs = jordan_product(x, jordan_product(x2, y));
      EXPECT_LE(trace_norm2(lhs - rhs), 1e-9 * trace_norm2(x2) * trace_norm2(x) * trace_norm2(y));
      EXPECT_LE(std::abs(inner(x, y)), p_norm(jordan_product(x, y), 1.0) + 1e-12 * scale);
    }
  }
}

TEST(Jacobi, MatchesEigenSolver) {
  Rng rng(5);
  for (int n : {1, 2, 3, 5, 8, 12}) {
    const Matrix g = rng.gaussian_matrix(n, n);
    const Matrix a = g + g.transpose();
    const SymmetricEigen je = jacobi_eigen(a);
    Eigen::SelfAdjointEigenSolver<Matrix> oracle(a);
    Vector mine = je.values;
    std::sort(mine.data(), mine.data() + n);
    EXPECT_LT((mine - oracle.eigenvalues()).cwiseAbs().maxCoeff(), 1e-11 * std::max(1.0, a.norm()));
    EXPECT_LT((je.vectors * je.values.asDiagonal() * je.vectors.transpose() - a).norm(), 1e-11 * a.norm());
  }
}

TEST(Spectral, Examples) {
  auto r = parse_algebra("rn:3");
  const Vector l = eigenvalues(rn(r, {3, 1, 2}));
  EXPECT_EQ(l, (Vector(3) << 3, 2, 1).finished());

  auto spin = parse_algebra("spin:3");
  const SpectralDecomposition sd = spectral_decompose(rn(spin, {1, 3, 4}));
  EXPECT_NEAR(sd.eigenvalues[0], 6.0, 1e-14);
  EXPECT_NEAR(sd.eigenvalues[1], -4.0, 1e-14);
  const Vector cp = (Vector(3) << 0.5, 0.3, 0.4).finished();
  const Vector cm = (Vector(3) << 0.5, -0.3, -0.4).finished();
  EXPECT_LT((sd.frame[0].coords() - cp).norm(), 1e-14);
  EXPECT_LT((sd.frame[1].coords() - cm).norm(), 1e-14);
  EXPECT_LT(trace_norm2(square(sd.frame[0]) - sd.frame[0]), 1e-14);
  EXPECT_LT(trace_norm2(6.0 * sd.frame[0] - 4.0 * sd.frame[1] - rn(spin, {1, 3, 4})), 1e-13);

  auto sym = parse_algebra("sym:2");
  const SpectralDecomposition s2 = spectral_decompose(sym_element(sym, mat2(0, 1, 1, 0)));
  EXPECT_NEAR(s2.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(s2.eigenvalues[1], -1.0, 1e-14);
  EXPECT_LT((to_matrix(s2.frame[0]) - 0.5 * mat2(1, 1, 1, 1)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((to_matrix(s2.frame[1]) - 0.5 * mat2(1, -1, -1, 1)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Spectral, SpinZeroVectorUsesFirstAxis) {
  auto spin = parse_algebra("spin:4");
  const SpectralDecomposition sd = spectral_decompose(rn(spin, {2, 0, 0, 0}));
  EXPECT_EQ(sd.frame[0].coords(), (Vector(4) << 0.5, 0.5, 0, 0).finished());
  EXPECT_EQ(sd.frame[1].coords(), (Vector(4) << 0.5, -0.5, 0, 0).finished());
}

TEST(Spectral, InvariantsOnRandomElements) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(2, "spectral", spec, 0);
    for (int t = 0; t < 100; ++t) {
      const Element x = random_element(alg, rng);
      const SpectralDecomposition sd = spectral_decompose(x);
      EXPECT_TRUE(is_jordan_frame(sd.frame)) << spec;
      for (int i = 1; i < sd.eigenvalues.size(); ++i) EXPECT_GE(sd.eigenvalues[i - 1], sd.eigenvalues[i]);
      EXPECT_LE(trace_norm2(sd.reconstruct() - x), 1e-9 * trace_norm2(x));
      // frame-independence: a sign flip and rescale reproduces the eigenvalues
      const Vector again = -eigenvalues(-1.0 * x);
      Vector sorted = again;
      std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
      EXPECT_LT((sorted - sd.eigenvalues).cwiseAbs().maxCoeff(), 1e-9 * trace_norm2(x));
      EXPECT_LT((eigenvalues(x) - sd.eigenvalues).cwiseAbs().maxCoeff(), 1e-12 * trace_norm2(x));
    }
  }
}

TEST(Spectral, SymMatchesEigenOracle) {
  auto alg = parse_algebra("sym:5");
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const Element x = random_element(alg, rng);
    Eigen::SelfAdjointEigenSolver<Matrix> oracle(to_matrix(x));
    Vector expected = oracle.eigenvalues().reverse();
    EXPECT_LT((eigenvalues(x) - expected).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(SpectralFn, Examples) {
  auto r = parse_algebra("rn:2");
  const Element ax = abs_element(rn(r, {4, -1}));
  EXPECT_EQ(eigenvalues(ax), (Vector(2) << 4, 1).finished());
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    const Element fe = apply_spectral_fn(unit(alg), [](double t) { return std::exp(t); });
    EXPECT_LT(trace_norm2(fe - std::exp(1.0) * unit(alg)), 1e-12);
  }
  // p = q = 2: u = sgn(x)|x|^{p/q} = x
  const Element x = rn(r, {4, 1});
  const Element u = apply_spectral_fn(x, [](double t) { return (t < 0 ? -1.0 : 1.0) * std::pow(std::abs(t), 1.0); });
  EXPECT_DOUBLE_EQ(inner(x, u), 17.0);
  EXPECT_DOUBLE_EQ(trace_norm2(x) * trace_norm2(u), 17.0);
}

TEST(SpectralFn, SqrtAndInverse) {
  auto alg = parse_algebra("sym:3");
  Rng rng(4);
  const Element a = random_element(alg, rng, Distribution::Psd);
  const Element r = sqrt_element(a);
  EXPECT_LT(trace_norm2(square(r) - a), 1e-10 * trace_norm2(a));
  const Element b = random_element(alg, rng, Distribution::Invertible);
  EXPECT_LT(trace_norm2(jordan_product(b, inverse_element(b)) - unit(alg)), 1e-9);
  EXPECT_THROW(sqrt_element(-1.0 * unit(alg)), domain_error);
  EXPECT_THROW(inverse_element(Element::zero(alg)), domain_error);
}

TEST(SpectralFn, FrameChoiceIndependent) {
  // degenerate eigenvalue: f depends only on eigenprojections
  auto alg = parse_algebra("sym:3");
  Matrix m = Matrix::Zero(3, 3);
  m.diagonal() << 2, 2, -1;
  Rng rng(8);
  const Matrix q = Eigen::HouseholderQR<Matrix>(rng.gaussian_matrix(3, 3)).householderQ();
  const Element x = sym_element(alg, q * m * q.transpose());
  const Element y = apply_spectral_fn(x, [](double t) { return t * t * t; });
  EXPECT_LT((to_matrix(y) - q * m.array().pow(3).matrix() * q.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Random, DeterministicAndDistributions) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    EXPECT_EQ(random_element(alg, 42).coords(), random_element(alg, 42).coords());
    for (std::uint64_t s = 0; s < 50; ++s) {
      EXPECT_GE(eigenvalues(random_element(alg, s, Distribution::Psd)).minCoeff(), -1e-12);
      EXPECT_GE(eigenvalues(random_element(alg, s, Distribution::Invertible)).cwiseAbs().minCoeff(), 1e-3);
    }
  }
  EXPECT_EQ(Rng::keyed(1, "a", "b", 3).next(), Rng::keyed(1, "a", "b", 3).next());
  EXPECT_NE(Rng::keyed(1, "a", "b", 3).next(), Rng::keyed(1, "a", "b", 4).next());
}

TEST(Peirce, UnitAndZero) {
  auto alg = parse_algebra("sym:3");
  const Element x = random_element(alg, 1);
  const Element e = unit(alg);
  EXPECT_LT(trace_norm2(peirce_project(e, 1.0, x) - x), 1e-13);
  EXPECT_LT(trace_norm2(peirce_project(e, 0.5, x)), 1e-13);
  EXPECT_LT(trace_norm2(peirce_project(e, 0.0, x)), 1e-13);
  EXPECT_LT(trace_norm2(peirce_project(Element::zero(alg), 0.0, x) - x), 1e-13);
}

TEST(Peirce, Sym2Example) {
  auto alg = parse_algebra("sym:2");
  const double a = 1.5, b = -0.7, d = 2.5;
  const Element c = sym_element(alg, mat2(1, 0, 0, 0));
  const Element x = sym_element(alg, mat2(a, b, b, d));
  EXPECT_LT((to_matrix(peirce_project(c, 1.0, x)) - mat2(a, 0, 0, 0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((to_matrix(peirce_project(c, 0.5, x)) - mat2(0, b, b, 0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((to_matrix(peirce_project(c, 0.0, x)) - mat2(0, 0, 0, d)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(peirce_project(x, 1.0, x), domain_error);
  EXPECT_THROW(peirce_project(c, 0.25, x), domain_error);
}

TEST(Peirce, ProjectionsAreOrthogonalEigenspaces) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(6, "peirce", spec, 0);
    const std::vector<Element> frame = random_frame(alg, rng);
    Element c = frame[0];
    for (std::size_t i = 2; i < frame.size(); i += 2) c += frame[i];
    const Element x = random_element(alg, rng);
    Element total = Element::zero(alg);
    for (double g : {0.0, 0.5, 1.0}) {
      const Element p = peirce_project(c, g, x);
      EXPECT_LT(trace_norm2(jordan_product(c, p) - g * p), 1e-10) << spec;
      total += p;
    }
    EXPECT_LT(trace_norm2(total - x), 1e-10);
  }
}

TEST(Peirce, FrameComponents) {
  auto alg = parse_algebra("sym:2");
  const std::vector<Element> frame{sym_element(alg, mat2(1, 0, 0, 0)), sym_element(alg, mat2(0, 0, 0, 1))};
  const PeirceComponents pc = frame_peirce_components(frame, sym_element(alg, mat2(1, 2, 2, 3)));
  EXPECT_LT((to_matrix(pc.at(0, 0)) - mat2(1, 0, 0, 0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((to_matrix(pc.at(1, 1)) - mat2(0, 0, 0, 3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((to_matrix(pc.at(0, 1)) - mat2(0, 2, 2, 0)).cwiseAbs().maxCoeff(), 1e-15);

  std::vector<Element> bad = frame;
  bad[1] = bad[0];
  EXPECT_THROW(frame_peirce_components(bad, frame[0]), domain_error);
}

TEST(Peirce, FrameComponentsOwnFrameAndRandom) {
  for (const char* spec : kSpecs) {
    auto alg = parse_algebra(spec);
    Rng rng = Rng::keyed(7, "frame-peirce", spec, 0);
    const Element x = random_element(alg, rng);
    const SpectralDecomposition sd = spectral_decompose(x);
    const PeirceComponents own = frame_peirce_components(sd.frame, x);
    const int n = alg->rank();
    for (int i = 0; i < n; ++i) {
      EXPECT_LT(trace_norm2(own.at(i, i) - sd.eigenvalues[i] * sd.frame[static_cast<std::size_t>(i)]), 1e-10);
      for (int j = i + 1; j < n; ++j) EXPECT_LT(trace_norm2(own.at(i, j)), 1e-10);
    }
    const std::vector<Element> frame = random_frame(alg, rng);
    const Element y = random_element(alg, rng);
    const PeirceComponents pc = frame_peirce_components(frame, y);
    EXPECT_LT(trace_norm2(pc.sum() - y), 1e-10 * trace_norm2(y)) << spec;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = k; l < n; ++l)
            if (i != k || j != l) {
              EXPECT_LT(std::abs(inner(pc.at(i, j), pc.at(k, l))), 1e-10);
            }
  }
}
