#pragma once

// Bipartite states on C^dA (x) C^dB. Basis vector |ij> sits at flat index
// i*dB + j; every map in the library depends on this convention.

#include <qconc/error.hpp>
#include <qconc/random.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>

namespace qconc {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct BipartiteDims {
  int dA = 1;
  int dB = 1;

  BipartiteDims() = default;
  BipartiteDims(int a, int b) : dA(a), dB(b) {
    if (a < 1 || b < 1)
      throw error(errc::dimension_mismatch,
                  "subsystem dimensions must be positive, got " + std::to_string(a) + "x" + std::to_string(b));
  }

  int d() const { return std::min(dA, dB); }
  int total() const { return dA * dB; }
  int index(int i, int j) const { return i * dB + j; }

  friend bool operator==(const BipartiteDims&, const BipartiteDims&) = default;
};

struct Tolerances {
  double hermitian = 1e-8;
  double trace = 1e-8;
  double psd = 1e-9;
  double norm = 1e-8;
};

enum class Subsystem { A, B };

class PureState {
 public:
  /// Validates the norm against tol.norm and renormalizes to exactly 1.
  PureState(BipartiteDims dims, ComplexVector amplitudes, const Tolerances& tol = {})
      : dims_(dims), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != dims_.total())
      throw error(errc::dimension_mismatch, "amplitude vector has length " + std::to_string(amplitudes_.size()) +
                                                ", expected " + std::to_string(dims_.total()));
    const double n = amplitudes_.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > tol.norm)
      throw error(errc::trace_mismatch, "state vector norm " + std::to_string(n) + " is not 1", n);
    amplitudes_ /= n;
  }

  const BipartiteDims& dims() const { return dims_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }

  /// dA x dB coefficient matrix, C(i, j) = <ij|psi>.
  ComplexMatrix coefficients() const {
    ComplexMatrix c(dims_.dA, dims_.dB);
    for (int i = 0; i < dims_.dA; ++i)
      for (int j = 0; j < dims_.dB; ++j) c(i, j) = amplitudes_(dims_.index(i, j));
    return c;
  }

 private:
  BipartiteDims dims_;
  ComplexVector amplitudes_;
};

class DensityMatrix;
DensityMatrix validate_density(const ComplexMatrix& matrix, BipartiteDims dims, const Tolerances& tol = {});

/// A validated state: Hermitian, unit trace, positive semidefinite.
/// Only constructible through validate_density (and the helpers built on it).
class DensityMatrix {
 public:
  const BipartiteDims& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  /// Eigenvalues ascending, clamped at zero.
  const RealVector& eigenvalues() const { return eigenvalues_; }
  /// Columns are eigenvectors matching eigenvalues().
  const ComplexMatrix& eigenvectors() const { return eigenvectors_; }

  std::complex<double> operator()(int row, int col) const { return matrix_(row, col); }

 private:
  friend DensityMatrix validate_density(const ComplexMatrix&, BipartiteDims, const Tolerances&);
  DensityMatrix() = default;

  BipartiteDims dims_;
  ComplexMatrix matrix_;
  RealVector eigenvalues_;
  ComplexMatrix eigenvectors_;
};

/// Checks shape, hermiticity, trace and positivity. The stored matrix is the
/// Hermitian part of the input; eigenvalues in [-tol.psd, 0) are clamped to
/// zero and the trace is renormalized to exactly 1.
inline DensityMatrix validate_density(const ComplexMatrix& matrix, BipartiteDims dims, const Tolerances& tol) {
  const Eigen::Index n = dims.total();
  if (matrix.rows() != n || matrix.cols() != n)
    throw error(errc::dimension_mismatch, "matrix is " + std::to_string(matrix.rows()) + "x" +
                                              std::to_string(matrix.cols()) + ", expected " + std::to_string(n) +
                                              "x" + std::to_string(n));
  if (!matrix.allFinite()) throw error(errc::not_hermitian, "matrix has non-finite entries");

  const double asym = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.hermitian) throw error(errc::not_hermitian, "max |M - M^dag| = " + std::to_string(asym), asym);

  const std::complex<double> tr = matrix.trace();
  if (std::abs(tr - 1.0) > tol.trace)
    throw error(errc::trace_mismatch, "trace " + std::to_string(tr.real()) + " differs from 1", tr.real());

  const ComplexMatrix herm = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm);
  if (eig.info() != Eigen::Success) throw error(errc::svd_failure, "eigensolver did not converge");

  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -tol.psd)
    throw error(errc::not_positive, "most negative eigenvalue " + std::to_string(min_eig), min_eig);

  DensityMatrix rho;
  rho.dims_ = dims;
  rho.eigenvectors_ = eig.eigenvectors();
  rho.eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
  rho.eigenvalues_ /= rho.eigenvalues_.sum();
  if (min_eig < 0.0) {
    rho.matrix_ = rho.eigenvectors_ * rho.eigenvalues_.cast<std::complex<double>>().asDiagonal() *
                  rho.eigenvectors_.adjoint();
  } else {
    rho.matrix_ = herm / herm.trace().real();
  }
  return rho;
}

/// |psi><psi|
inline DensityMatrix projector(const PureState& psi) {
  const ComplexVector& v = psi.amplitudes();
  return validate_density(v * v.adjoint(), psi.dims());
}

/// Squared Schmidt coefficients, descending, length d = min(dA, dB).
class SchmidtSpectrum {
 public:
  /// Validates a probability vector and sorts it descending. Entries in
  /// [-tol, 0) are clamped to 0.
  explicit SchmidtSpectrum(RealVector lambdas, double tol = 1e-8) : lambdas_(std::move(lambdas)) {
    if (lambdas_.size() == 0) throw error(errc::dimension_mismatch, "empty spectrum");
    if (!lambdas_.allFinite()) throw error(errc::domain_error, "spectrum has non-finite entries");
    if (lambdas_.minCoeff() < -tol)
      throw error(errc::domain_error, "negative Schmidt weight " + std::to_string(lambdas_.minCoeff()));
    lambdas_ = lambdas_.cwiseMax(0.0);
    const double sum = lambdas_.sum();
    if (std::abs(sum - 1.0) > tol) throw error(errc::trace_mismatch, "spectrum sums to " + std::to_string(sum), sum);
    lambdas_ /= sum;
    std::sort(lambdas_.begin(), lambdas_.end(), std::greater<>());
  }

  const RealVector& lambdas() const { return lambdas_; }
  Eigen::Index size() const { return lambdas_.size(); }
  double operator[](Eigen::Index i) const { return lambdas_(i); }

 private:
  RealVector lambdas_;
};

inline SchmidtSpectrum schmidt_spectrum(const PureState& psi) {
  Eigen::JacobiSVD<ComplexMatrix> svd(psi.coefficients());
  // min(dA, dB) singular values, zeros included when rank deficient.
  const RealVector lambdas = svd.singularValues().cwiseAbs2();
  return SchmidtSpectrum(lambdas / lambdas.sum());
}

/// Reduced state. Tracing out B gives a dA x dA matrix, tracing out A a dB x dB one.
inline ComplexMatrix partial_trace(const DensityMatrix& rho, Subsystem traced_out) {
  const auto [dA, dB] = rho.dims();
  const ComplexMatrix& m = rho.matrix();
  if (traced_out == Subsystem::B) {
    ComplexMatrix out = ComplexMatrix::Zero(dA, dA);
    for (int i = 0; i < dA; ++i)
      for (int k = 0; k < dA; ++k)
        for (int j = 0; j < dB; ++j) out(i, k) += m(i * dB + j, k * dB + j);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(dB, dB);
  for (int j = 0; j < dB; ++j)
    for (int l = 0; l < dB; ++l)
      for (int i = 0; i < dA; ++i) out(j, l) += m(i * dB + j, i * dB + l);
  return out;
}

/// rho_A (x) rho_B for two single-party density operators.
inline DensityMatrix product_state(const ComplexMatrix& rhoA, const ComplexMatrix& rhoB) {
  const ComplexMatrix m = Eigen::kroneckerProduct(rhoA, rhoB).eval();
  return validate_density(m, BipartiteDims(static_cast<int>(rhoA.rows()), static_cast<int>(rhoB.rows())));
}

inline DensityMatrix maximally_mixed(BipartiteDims dims) {
  const int n = dims.total();
  return validate_density(ComplexMatrix::Identity(n, n) / static_cast<double>(n), dims);
}

/// (U_A (x) U_B) rho (U_A (x) U_B)^dag
inline DensityMatrix conjugate_local(const DensityMatrix& rho, const ComplexMatrix& uA, const ComplexMatrix& uB) {
  const ComplexMatrix u = Eigen::kroneckerProduct(uA, uB).eval();
  return validate_density(u * rho.matrix() * u.adjoint(), rho.dims());
}

/// Haar-random pure state: dA*dB complex normals drawn in flat-index order,
/// then normalized.
inline PureState random_pure_state(BipartiteDims dims, std::uint64_t seed) {
  Rng rng(seed);
  ComplexVector v = ginibre(rng, dims.total(), 1).col(0);
  v.normalize();
  return PureState(dims, std::move(v));
}

/// Mixture of `rank` Haar-random pure states with flat-Dirichlet weights.
/// Draw order from one stream: the rank state vectors (dA*dB normals each),
/// then rank exponentials for the weights.
inline DensityMatrix random_density(BipartiteDims dims, int rank, std::uint64_t seed) {
  if (rank < 1 || rank > dims.total())
    throw error(errc::rank_out_of_range,
                "rank " + std::to_string(rank) + " outside [1, " + std::to_string(dims.total()) + "]");
  Rng rng(seed);
  ComplexMatrix vecs = ginibre(rng, dims.total(), rank);
  vecs.colwise().normalize();
  const RealVector w = dirichlet_uniform(rng, rank);
  ComplexMatrix m = vecs * w.cast<std::complex<double>>().asDiagonal() * vecs.adjoint();
  return validate_density(m, dims);
}

/// Mixture of `terms` random product projectors |a><a| (x) |b><b|; separable
/// by construction.
inline DensityMatrix random_separable(BipartiteDims dims, int terms, std::uint64_t seed) {
  Rng rng(seed);
  ComplexMatrix m = ComplexMatrix::Zero(dims.total(), dims.total());
  const RealVector w = dirichlet_uniform(rng, terms);
  for (int t = 0; t < terms; ++t) {
    ComplexVector a = ginibre(rng, dims.dA, 1).col(0).normalized();
    ComplexVector b = ginibre(rng, dims.dB, 1).col(0).normalized();
    const ComplexVector ab = Eigen::kroneckerProduct(a, b).eval();
    m += w(t) * ab * ab.adjoint();
  }
  return validate_density(m, dims);
}

}  // namespace qconc
