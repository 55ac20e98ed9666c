#pragma once

// q-concurrence C_q = 1 - Tr rho_A^q (q >= 2) on pure states, the
// monotonicity machinery behind its lower bounds, and lower/upper bounds for
// mixed states.

#include <qconc/maps.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace qconc {

class QParam {
 public:
  explicit QParam(double q) : q_(q) {
    if (!(q >= 2.0) || !std::isfinite(q))
      throw error(errc::domain_error, "q must be finite and >= 2, got " + std::to_string(q), q);
  }
  double value() const { return q_; }
  operator double() const { return q_; }

 private:
  double q_;
};

namespace detail {

inline double power_sum(const RealVector& lambdas, double q) {
  double s = 0.0;
  for (double l : lambdas) s += std::pow(l, q);
  return s;
}

/// q(q-1) ln 2 - (2q-1)(1 - 2^{1-q}); sign of the curvature of G_{2q} at the
/// uniform spectrum.
inline double qubit_curvature(double q) {
  return q * (q - 1.0) * std::log(2.0) - (2.0 * q - 1.0) * (1.0 - std::pow(2.0, 1.0 - q));
}

inline double critical_s_bisect() {
  double lo = 2.0;
  double hi = 3.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (qubit_curvature(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Root on (2, 3) of q(q-1) ln 2 = (2q-1)(1 - 2^{1-q}), to 1e-12. For d = 2 the
/// ratio f(q) below is non-decreasing once q >= s.
inline double critical_s() {
  static const double s = detail::critical_s_bisect();
  return s;
}

/// 1 - sum_i lambda_i^q
inline double q_concurrence_pure(const SchmidtSpectrum& lambda, QParam q) {
  return std::max(0.0, 1.0 - detail::power_sum(lambda.lambdas(), q));
}

inline double q_concurrence_pure(const PureState& psi, QParam q) { return q_concurrence_pure(schmidt_spectrum(psi), q); }

/// Largest value of C_q at Schmidt rank d: 1 - d^{1-q}.
inline double max_q_concurrence(int d, double q) { return 1.0 - std::pow(static_cast<double>(d), 1.0 - q); }

/// f(q) = C_q / (1 - d^{1-q}).
inline double f_ratio(const SchmidtSpectrum& lambda, QParam q, int d) {
  if (d < 2) throw error(errc::domain_error, "f_ratio needs d >= 2");
  return (1.0 - detail::power_sum(lambda.lambdas(), q)) / max_q_concurrence(d, q);
}

/// G_dq = sum_i lambda_i^q ln(lambda_i) (d^{1-q} - 1) - (1 - sum_i lambda_i^q) d^{1-q} ln d.
/// df/dq = G_dq / (1 - d^{1-q})^2, so its sign is the sign of the slope of f.
inline double g_dq(const SchmidtSpectrum& lambda, QParam q, int d) {
  if (d < 2) throw error(errc::domain_error, "g_dq needs d >= 2");
  double sum_q = 0.0;
  double sum_q_log = 0.0;
  for (double l : lambda.lambdas()) {
    if (!(l > 0.0)) throw error(errc::nonpositive_lambda, "G_dq needs strictly positive weights", l);
    const double lq = std::pow(l, q.value());
    sum_q += lq;
    sum_q_log += lq * std::log(l);
  }
  const double dq = std::pow(static_cast<double>(d), 1.0 - q);
  return sum_q_log * (dq - 1.0) - (1.0 - sum_q) * dq * std::log(static_cast<double>(d));
}

/// Rescales a known C_h into a lower bound on C_q for q >= h. Valid for
/// h >= s at d = 2 and for h >= 2 at d >= 3.
inline double corollary1_bound(double c_h, double h, QParam q, int d) {
  if (q.value() < h) throw error(errc::regime_violation, "corollary bound needs q >= h");
  if (d < 2) throw error(errc::regime_violation, "corollary bound needs d >= 2");
  if (d == 2 && h < critical_s()) throw error(errc::regime_violation, "d = 2 needs h >= s", h);
  if (h < 2.0) throw error(errc::regime_violation, "corollary bound needs h >= 2", h);
  const double ceiling = max_q_concurrence(d, h);
  if (c_h < 0.0 || c_h > ceiling + 1e-12)
    throw error(errc::domain_error, "C_h outside [0, 1 - d^{1-h}]", c_h);
  return max_q_concurrence(d, q) / ceiling * c_h;
}

enum class BoundRegime {
  GeneralD,     // q >= 2, d >= 3
  Qubit3Plus,   // q >= 3, d = 2
  QubitSRange,  // s <= q < 3, d = 2
  QubitGap,     // 2 <= q < s, d = 2: no proven bound
};

inline const char* to_string(BoundRegime r) {
  switch (r) {
    case BoundRegime::GeneralD: return "GeneralD";
    case BoundRegime::Qubit3Plus: return "Qubit3Plus";
    case BoundRegime::QubitSRange: return "QubitSRange";
    case BoundRegime::QubitGap: return "QubitGap";
  }
  return "?";
}

inline BoundRegime bound_regime(QParam q, int d) {
  if (d < 2) throw error(errc::domain_error, "bounds need d = min(dA, dB) >= 2");
  if (d >= 3) return BoundRegime::GeneralD;
  if (q.value() >= 3.0) return BoundRegime::Qubit3Plus;
  if (q.value() >= critical_s()) return BoundRegime::QubitSRange;
  return BoundRegime::QubitGap;
}

struct Theorem1Bound {
  std::optional<double> value;
  BoundRegime regime;
};

/// Lower bound on C_q from m = max(||rho^Gamma||_1, ||R(rho)||_1).
inline Theorem1Bound theorem1_from_norm(double max_norm, QParam q, int d) {
  const BoundRegime regime = bound_regime(q, d);
  const double t = std::max(max_norm - 1.0, 0.0);
  switch (regime) {
    case BoundRegime::GeneralD:
    case BoundRegime::Qubit3Plus: {
      const double dm1 = d - 1.0;
      return {max_q_concurrence(d, q) / (dm1 * dm1) * t * t, regime};
    }
    case BoundRegime::QubitSRange:
      return {max_q_concurrence(2, q) / (2.0 - std::pow(2.0, 2.0 - critical_s())) * t * t, regime};
    case BoundRegime::QubitGap:
      break;
  }
  return {std::nullopt, regime};
}

inline Theorem1Bound theorem1_lower_bound(const DensityMatrix& rho, QParam q) {
  return theorem1_from_norm(std::max(ppt_norm(rho), realign_norm(rho)), q, rho.dims().d());
}

/// [max(||rho^Gamma||_1, ||R(rho)||_1)^{q-1} - 1]^2 / (d^{2q-2} - d^{q-1})
inline double prior_from_norm(double max_norm, QParam q, int d) {
  if (d < 2) throw error(errc::domain_error, "bounds need d = min(dA, dB) >= 2");
  const double t = std::max(std::pow(max_norm, q - 1.0) - 1.0, 0.0);
  const double dd = static_cast<double>(d);
  return t * t / (std::pow(dd, 2.0 * q - 2.0) - std::pow(dd, q - 1.0));
}

inline double prior_lower_bound(const DensityMatrix& rho, QParam q) {
  return prior_from_norm(std::max(ppt_norm(rho), realign_norm(rho)), q, rho.dims().d());
}

namespace detail {

/// Eigenvalues below this count as zero when forming decompositions.
inline constexpr double kRankCutoff = 1e-12;

/// Average C_q over the ensemble whose unnormalized members are the columns
/// of `members` (n x K).
inline double ensemble_average(const ComplexMatrix& members, BipartiteDims dims, double q) {
  double total = 0.0;
  ComplexMatrix coeff(dims.dA, dims.dB);
  for (Eigen::Index c = 0; c < members.cols(); ++c) {
    const double p = members.col(c).squaredNorm();
    if (p < 1e-300) continue;
    for (int i = 0; i < dims.dA; ++i)
      for (int j = 0; j < dims.dB; ++j) coeff(i, j) = members(dims.index(i, j), c);
    Eigen::JacobiSVD<ComplexMatrix> svd(coeff);
    const RealVector lambdas = svd.singularValues().cwiseAbs2() / p;
    total += p * std::max(0.0, 1.0 - power_sum(lambdas, q));
  }
  return total;
}

}  // namespace detail

/// Heuristic upper bound on the convex roof of C_q.
///
/// With rho = W W^dag, W = [sqrt(mu_1) e_1, ..., sqrt(mu_r) e_r] from the
/// eigendecomposition, every K-member pure-state decomposition of rho is
/// W U^T for some K x r isometry U. Candidate 0 is the eigendecomposition
/// itself; candidate t >= 1 uses a Haar isometry with K = r + (t-1) mod (r+1)
/// columns (so K cycles through r..2r), drawn from derive_seed(seed, t). The
/// result is the minimum over candidates 0..iterations, so it never increases
/// with more iterations and does not depend on `threads`.
inline double convex_roof_upper_bound(const DensityMatrix& rho, QParam q, int iterations, std::uint64_t seed,
                                      unsigned threads = 1) {
  const RealVector& mu = rho.eigenvalues();
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (mu(i) > detail::kRankCutoff) support.push_back(i);
  const auto rank = static_cast<Eigen::Index>(support.size());

  ComplexMatrix w(rho.dims().total(), rank);
  for (Eigen::Index c = 0; c < rank; ++c) w.col(c) = std::sqrt(mu(support[c])) * rho.eigenvectors().col(support[c]);

  const double qv = q.value();
  const auto evaluate = [&](int t) {
    if (t == 0) return detail::ensemble_average(w, rho.dims(), qv);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Eigen::Index k = rank + (t - 1) % (rank + 1);
    const ComplexMatrix u = haar_isometry(rng, k, rank);
    return detail::ensemble_average(w * u.transpose(), rho.dims(), qv);
  };

  const int total = std::max(iterations, 0) + 1;
  const unsigned workers = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(total));
  if (workers == 1) {
    double best = std::numeric_limits<double>::infinity();
    for (int t = 0; t < total; ++t) best = std::min(best, evaluate(t));
    return best;
  }

  std::vector<double> partial(workers, std::numeric_limits<double>::infinity());
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned wk = 0; wk < workers; ++wk)
      pool.emplace_back([&, wk] {
        for (int t = static_cast<int>(wk); t < total; t += static_cast<int>(workers))
          partial[wk] = std::min(partial[wk], evaluate(t));
      });
  }
  return *std::min_element(partial.begin(), partial.end());
}

struct BoundOptions {
  /// Random decompositions tried by the upper-bound search; 0 skips it.
  int upper_iterations = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct BoundReport {
  double q = 2.0;
  BipartiteDims dims;
  double ppt_norm = 1.0;
  double realign_norm = 1.0;
  BoundRegime regime = BoundRegime::GeneralD;
  std::optional<double> theorem1_bound;
  double prior_bound = 0.0;
  double best_lower = 0.0;
  std::optional<double> upper_estimate;
};

inline BoundReport bound_report(const DensityMatrix& rho, QParam q, const BoundOptions& options = {}) {
  BoundReport r;
  r.q = q.value();
  r.dims = rho.dims();
  r.ppt_norm = ppt_norm(rho);
  r.realign_norm = realign_norm(rho);
  const double m = std::max(r.ppt_norm, r.realign_norm);
  const int d = rho.dims().d();
  const Theorem1Bound t1 = theorem1_from_norm(m, q, d);
  r.regime = t1.regime;
  r.theorem1_bound = t1.value;
  r.prior_bound = prior_from_norm(m, q, d);
  r.best_lower = std::max({0.0, r.prior_bound, t1.value.value_or(0.0)});
  if (options.upper_iterations > 0)
    r.upper_estimate = convex_roof_upper_bound(rho, q, options.upper_iterations, options.seed, options.threads);
  return r;
}

}  // namespace qconc
