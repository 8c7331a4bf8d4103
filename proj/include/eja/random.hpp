#pragma once

// Seeded sampling of algebra elements, frames and matrices.
//
// Streams are keyed by (seed, labels..., index): each key is hashed into an
// independent 64-bit engine seed, so a trial's samples never depend on which
// worker draws them or in what order.

#include "eja/algebra.hpp"
#include "eja/spectral.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace eja {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Stream for (seed, label, sublabel, index).
  static Rng keyed(std::uint64_t seed, std::string_view label, std::string_view sublabel, std::uint64_t index) {
    std::uint64_t h = mix(seed ^ 0x6a09e667f3bcc909ULL);
    h = mix(h ^ fnv1a(label));
    h = mix(h ^ fnv1a(sublabel));
    h = mix(h ^ index);
    return Rng(h);
  }

  double gaussian() { return normal_(engine_); }
  double uniform(double lo = 0.0, double hi = 1.0) { return lo + (hi - lo) * unit_(engine_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::uint64_t next() { return engine_(); }

  Vector gaussian_vector(int n) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  Matrix gaussian_matrix(int rows, int cols) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = gaussian();
    return m;
  }

  Vector unit_vector(int n) {
    Vector v = gaussian_vector(n);
    double r = v.norm();
    while (r < 1e-12) {
      v = gaussian_vector(n);
      r = v.norm();
    }
    return v / r;
  }

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

enum class Distribution { Gaussian, Psd, Invertible };

inline constexpr double kInvertibleFloor = 0.05;

/// gaussian: iid N(0,1) orthonormal coordinates. psd: |g| for a gaussian g.
/// invertible: eigenvalues of a gaussian g pushed away from zero to at least
/// kInvertibleFloor in magnitude, keeping the frame.
inline Element random_element(const AlgebraPtr& algebra, Rng& rng, Distribution dist = Distribution::Gaussian) {
  Element g = from_orthonormal(algebra, rng.gaussian_vector(algebra->dim()));
  switch (dist) {
    case Distribution::Gaussian: return g;
    case Distribution::Psd: return abs_element(g);
    case Distribution::Invertible:
      return apply_spectral_fn(g, [](double t) {
        const double mag = std::max(std::abs(t), kInvertibleFloor);
        return t < 0.0 ? -mag : mag;
      });
  }
  return g;
}

inline Element random_element(const AlgebraPtr& algebra, std::uint64_t seed, Distribution dist = Distribution::Gaussian) {
  Rng rng(seed);
  return random_element(algebra, rng, dist);
}

/// Ordered Jordan frame of a gaussian element.
inline std::vector<Element> random_frame(const AlgebraPtr& algebra, Rng& rng) {
  return spectral_decompose(random_element(algebra, rng)).frame;
}

/// Primitive idempotent of a uniformly chosen factor.
inline Element random_primitive(const AlgebraPtr& algebra, Rng& rng) {
  const int f = rng.uniform_int(0, static_cast<int>(algebra->num_factors()) - 1);
  const Factor& fac = algebra->factor(static_cast<std::size_t>(f));
  Element c = Element::zero(algebra);
  auto b = c.block(static_cast<std::size_t>(f));
  switch (fac.family) {
    case Family::Rn: b[rng.uniform_int(0, fac.size - 1)] = 1.0; break;
    case Family::Spin:
      b[0] = 0.5;
      b.tail(fac.size - 1) = 0.5 * rng.unit_vector(fac.size - 1);
      break;
    case Family::Sym: {
      const Vector q = rng.unit_vector(fac.size);
      b = matrix_to_svec(q * q.transpose());
      break;
    }
  }
  return c;
}

/// Random PSD matrix with unit diagonal (normalized Gram matrix).
inline Matrix random_correlation(int n, Rng& rng) {
  const Matrix g = rng.gaussian_matrix(n, n + 1);
  Matrix a = g * g.transpose();
  const Vector d = a.diagonal().cwiseSqrt().cwiseInverse();
  a = d.asDiagonal() * a * d.asDiagonal();
  for (int i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

}  // namespace eja
