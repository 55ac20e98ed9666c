#pragma once

// Partial transposition, realignment and the trace norm.

#include <qconc/state.hpp>

namespace qconc {

/// rho^Gamma with entries rho^Gamma_{il,kj} = rho_{ij,kl} (transpose on B),
/// or rho^{T_A}_{kj,il} = rho_{ij,kl} when `on` is A. The two differ by a full
/// transpose, so their spectra and trace norms coincide.
inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Subsystem on = Subsystem::B) {
  const auto [dA, dB] = rho.dims();
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dB; ++j)
      for (int k = 0; k < dA; ++k)
        for (int l = 0; l < dB; ++l) {
          const auto v = m(i * dB + j, k * dB + l);
          if (on == Subsystem::B)
            out(i * dB + l, k * dB + j) = v;
          else
            out(k * dB + j, i * dB + l) = v;
        }
  return out;
}

/// R(rho) of shape dA^2 x dB^2 with R_{ik,jl} = rho_{ij,kl}; row (i,k) -> i*dA + k,
/// column (j,l) -> j*dB + l.
inline ComplexMatrix realign(const DensityMatrix& rho) {
  const auto [dA, dB] = rho.dims();
  const ComplexMatrix& m = rho.matrix();
  ComplexMatrix out(dA * dA, dB * dB);
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dB; ++j)
      for (int k = 0; k < dA; ++k)
        for (int l = 0; l < dB; ++l) out(i * dA + k, j * dB + l) = m(i * dB + j, k * dB + l);
  return out;
}

/// Sum of singular values; works for any shape.
inline double trace_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw error(errc::svd_failure, "matrix has non-finite entries");
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  if (svd.info() != Eigen::Success) throw error(errc::svd_failure, "SVD did not converge");
  return svd.singularValues().sum();
}

inline double ppt_norm(const DensityMatrix& rho) { return trace_norm(partial_transpose(rho)); }
inline double realign_norm(const DensityMatrix& rho) { return trace_norm(realign(rho)); }

}  // namespace qconc
