#pragma once

// Seeded random numbers with a fixed, documented protocol so that any
// implementation can reproduce a stream from its seed:
//
//   engine    std::mt19937_64 seeded with the 64-bit seed
//   uniform   u = ((x >> 11) + 0.5) * 2^-53        in (0, 1)
//   normal    Box-Muller on (u1, u2): r = sqrt(-2 ln u1),
//             z = (r cos 2pi u2, r sin 2pi u2)      one complex normal
//   exp(1)    -ln u
//
// std:: distributions are not used because their output is implementation
// defined.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace qconc {

/// splitmix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for the `index`-th child stream of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  std::complex<double> complex_normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  double exponential() { return -std::log(uniform()); }

 private:
  std::mt19937_64 engine_;
};

/// rows x cols matrix of i.i.d. complex normals, filled column by column.
inline Eigen::MatrixXcd ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
  return m;
}

/// Haar-distributed isometry (rows >= cols, orthonormal columns): QR of a
/// Ginibre matrix with the phases of R's diagonal absorbed into Q.
inline Eigen::MatrixXcd haar_isometry(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  const Eigen::MatrixXcd z = ginibre(rng, rows, cols);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const std::complex<double> diag = r(j, j);
    const double mag = std::abs(diag);
    if (mag > 0.0) q.col(j) *= diag / mag;
  }
  return q;
}

inline Eigen::MatrixXcd haar_unitary(Rng& rng, Eigen::Index n) { return haar_isometry(rng, n, n); }

/// Uniform point on the probability simplex (flat Dirichlet).
inline Eigen::VectorXd dirichlet_uniform(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = rng.exponential();
  return w / w.sum();
}

}  // namespace qconc
