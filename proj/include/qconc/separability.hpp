#pragma once

// Entanglement detection from the PPT and realignment (CCNR) criteria. Both
// are necessary conditions for separability, so a verdict is either
// Entangled or Inconclusive; nothing here certifies separability.

#include <qconc/maps.hpp>

#include <vector>

namespace qconc {

/// Margin a witness must clear before a state is flagged.
inline constexpr double kDetectionMargin = 1e-9;
/// Eigenvalues of rho^Gamma below -kPptMargin count as negative.
inline constexpr double kPptMargin = 1e-9;

enum class Status { Entangled, Inconclusive };
enum class Criterion { PPT, CCNR };

inline const char* to_string(Status s) { return s == Status::Entangled ? "Entangled" : "Inconclusive"; }
inline const char* to_string(Criterion c) { return c == Criterion::PPT ? "PPT" : "CCNR"; }

struct Verdict {
  Status status;
  Criterion criterion;
  /// PPT: smallest eigenvalue of rho^Gamma. CCNR: ||R(rho)||_1 - 1.
  double witness;
};

inline Verdict ppt_test(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(partial_transpose(rho), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw error(errc::svd_failure, "eigensolver did not converge");
  const double min_eig = eig.eigenvalues().minCoeff();
  return {min_eig < -kPptMargin ? Status::Entangled : Status::Inconclusive, Criterion::PPT, min_eig};
}

inline Verdict ccnr_test(const DensityMatrix& rho) {
  const double w = realign_norm(rho) - 1.0;
  return {w > kDetectionMargin ? Status::Entangled : Status::Inconclusive, Criterion::CCNR, w};
}

struct Detection {
  std::vector<Verdict> verdicts;
  bool entangled = false;
};

inline Detection detect(const DensityMatrix& rho) {
  Detection out;
  out.verdicts = {ppt_test(rho), ccnr_test(rho)};
  for (const auto& v : out.verdicts) out.entangled = out.entangled || v.status == Status::Entangled;
  return out;
}

}  // namespace qconc
