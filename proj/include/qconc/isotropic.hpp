#pragma once

// Isotropic states rho_F = (1-F)/(d^2-1) (I - P) + F P, P = |Psi+><Psi+|, and
// their exact q-concurrence: the lower convex envelope of
//
//   g(F) = 0                                    F <= 1/d
//   g(F) = xi(F) = 1 - gamma^{2q} - (d-1) delta^{2q}     F >  1/d
//
// with gamma = (sqrt F + sqrt((d-1)(1-F))) / sqrt d and
//      delta = (sqrt F - sqrt((1-F)/(d-1))) / sqrt d.

#include <qconc/convex_envelope.hpp>
#include <qconc/qconcurrence.hpp>
#include <qconc/state.hpp>

#include <optional>
#include <string_view>
#include <utility>

namespace qconc {

class Fidelity {
 public:
  explicit Fidelity(double f) : f_(f) {
    if (!(f >= 0.0 && f <= 1.0)) throw error(errc::domain_error, "fidelity must lie in [0, 1]", f);
  }
  double value() const { return f_; }
  operator double() const { return f_; }

 private:
  double f_;
};

inline ComplexVector max_entangled_vector(int d) {
  ComplexVector v = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

inline DensityMatrix isotropic_state(Fidelity F, int d) {
  if (d < 2) throw error(errc::domain_error, "isotropic states need d >= 2");
  const int n = d * d;
  const ComplexVector psi = max_entangled_vector(d);
  const ComplexMatrix p = psi * psi.adjoint();
  const double noise = (1.0 - F) / (n - 1.0);
  const ComplexMatrix m = noise * (ComplexMatrix::Identity(n, n) - p) + F.value() * p;
  return validate_density(m, BipartiteDims(d, d));
}

namespace detail {

struct XiTerms {
  double gamma, delta, dgamma, ddelta;
};

inline XiTerms xi_terms(double F, int d) {
  const double sd = std::sqrt(static_cast<double>(d));
  const double dm1 = d - 1.0;
  const double sf = std::sqrt(F);
  const double sr = std::sqrt(std::max(0.0, 1.0 - F));
  XiTerms t{};
  t.gamma = (sf + std::sqrt(dm1) * sr) / sd;
  t.delta = std::max(0.0, (sf - sr / std::sqrt(dm1)) / sd);
  t.dgamma = (0.5 / sf - 0.5 * std::sqrt(dm1) / sr) / sd;
  t.ddelta = (0.5 / sf + 0.5 / (std::sqrt(dm1) * sr)) / sd;
  return t;
}

inline double xi_unchecked(double F, double q, int d) {
  const XiTerms t = xi_terms(F, d);
  return 1.0 - std::pow(t.gamma, 2.0 * q) - (d - 1.0) * std::pow(t.delta, 2.0 * q);
}

/// d xi / dF on the open interval (1/d, 1).
inline double xi_slope(double F, double q, int d) {
  const XiTerms t = xi_terms(F, d);
  return -2.0 * q * std::pow(t.gamma, 2.0 * q - 1.0) * t.dgamma -
         (d - 1.0) * 2.0 * q * std::pow(t.delta, 2.0 * q - 1.0) * t.ddelta;
}

/// xi extended by the separable plateau.
inline double extended_xi(double F, double q, int d) { return F <= 1.0 / d ? 0.0 : xi_unchecked(F, q, d); }

template <class Fn>
std::optional<double> bisect_root(Fn&& h, double lo, double hi) {
  double hlo = h(lo);
  const double hhi = h(hi);
  if (hlo == 0.0) return lo;
  if (hhi == 0.0) return hi;
  if ((hlo < 0.0) == (hhi < 0.0)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if ((hm < 0.0) == (hlo < 0.0)) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline double xi(Fidelity F, QParam q, int d) {
  if (d < 2) throw error(errc::domain_error, "xi needs d >= 2");
  if (!(F.value() > 1.0 / d)) throw error(errc::domain_error, "xi is defined for F > 1/d", F);
  return detail::xi_unchecked(F, q, d);
}

struct IsotropicEnvelope {
  PiecewiseLinear envelope;
  /// Segments [left, right] where the envelope runs strictly below xi.
  std::vector<std::pair<double, double>> chords;
};

inline constexpr int kDefaultEnvelopeGrid = 2048;

/// Lower convex envelope of the extended xi on [0, 1].
///
/// Samples a uniform grid of grid_size points plus {0, 1/d, 1} and takes the
/// lower hull. Hull segments that skip two or more samples above 1/d are
/// chords; their free endpoints are moved onto the exact tangency point of
/// xi by bisection so the knot abscissae are not limited by the grid.
inline IsotropicEnvelope isotropic_envelope(QParam q, int d, int grid_size = kDefaultEnvelopeGrid) {
  if (d < 2) throw error(errc::domain_error, "isotropic envelope needs d >= 2");
  if (grid_size < 64) throw error(errc::domain_error, "grid_size must be at least 64");
  const double qv = q.value();
  const double sep = 1.0 / d;

  std::vector<double> xs;
  xs.reserve(grid_size + 1);
  for (int k = 0; k < grid_size; ++k) xs.push_back(static_cast<double>(k) / (grid_size - 1));
  xs.push_back(sep);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), xs.end());

  std::vector<Point> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x, detail::extended_xi(x, qv, d)});

  const std::vector<std::size_t> hull = lower_hull_indices(pts);
  std::vector<Point> knots;
  knots.reserve(hull.size());
  for (std::size_t i : hull) knots.push_back(pts[i]);

  const double lo_limit = sep + 1e-13;
  const double hi_limit = 1.0 - 1e-13;
  const auto is_free = [&](double x) { return x > sep && x < 1.0; };

  IsotropicEnvelope out{PiecewiseLinear({{0.0, 0.0}}), {}};
  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    const std::size_t ia = hull[h];
    const std::size_t ib = hull[h + 1];
    if (ib - ia < 3 || pts[ib].x <= sep) continue;

    double a = pts[ia].x;
    double b = pts[ib].x;
    const double a_lo = std::max(pts[ia > 0 ? ia - 1 : ia].x, lo_limit);
    const double a_hi = std::min(pts[ia + 1].x, hi_limit);
    const double b_lo = std::max(pts[ib - 1].x, lo_limit);
    const double b_hi = std::min(pts[ib + 1 < pts.size() ? ib + 1 : ib].x, hi_limit);

    for (int round = 0; round < 4; ++round) {
      if (is_free(a)) {
        const double gb = detail::extended_xi(b, qv, d);
        const auto tangent_left = [&](double x) {
          return detail::xi_slope(x, qv, d) * (b - x) - (gb - detail::xi_unchecked(x, qv, d));
        };
        if (auto root = detail::bisect_root(tangent_left, a_lo, a_hi)) a = *root;
      }
      if (is_free(b)) {
        const double ga = detail::extended_xi(a, qv, d);
        const auto tangent_right = [&](double x) {
          return detail::xi_slope(x, qv, d) * (x - a) - (detail::xi_unchecked(x, qv, d) - ga);
        };
        if (auto root = detail::bisect_root(tangent_right, b_lo, b_hi)) b = *root;
      }
    }
    knots[h] = {a, detail::extended_xi(a, qv, d)};
    knots[h + 1] = {b, detail::extended_xi(b, qv, d)};
    out.chords.emplace_back(a, b);
  }
  out.envelope = PiecewiseLinear(std::move(knots));
  return out;
}

/// C_q(rho_F) as a function of F on [0, 1].
inline PiecewiseLinear exact_isotropic_qc(QParam q, int d, int grid_size = kDefaultEnvelopeGrid) {
  return isotropic_envelope(q, d, grid_size).envelope;
}

/// Largest F where the envelope leaves xi: left end of the last chord.
/// Empty when the envelope coincides with the extended xi.
inline std::optional<double> kink_point(QParam q, int d, int grid_size = kDefaultEnvelopeGrid) {
  const IsotropicEnvelope env = isotropic_envelope(q, d, grid_size);
  if (env.chords.empty()) return std::nullopt;
  return env.chords.back().first;
}

enum class IsotropicOracle { c3d2, c3d3, c4d2 };

inline IsotropicOracle parse_oracle(std::string_view name) {
  if (name == "c3d2") return IsotropicOracle::c3d2;
  if (name == "c3d3") return IsotropicOracle::c3d3;
  if (name == "c4d2") return IsotropicOracle::c4d2;
  throw error(errc::unknown_oracle, "unknown closed form '" + std::string(name) + "'");
}

/// Published closed forms of C_q(rho_F), with their printed (rounded)
/// constants: (q=3, d=2), (q=3, d=3) and (q=4, d=2).
inline double closed_form_oracle(IsotropicOracle which, Fidelity F) {
  const double f = F.value();
  switch (which) {
    case IsotropicOracle::c3d2: {
      if (f <= 0.5) return 0.0;
      const double x = 2.0 * f - 1.0;
      return 0.75 * x * x;
    }
    case IsotropicOracle::c3d3:
      if (f <= 1.0 / 3.0) return 0.0;
      if (f <= 0.86) return detail::xi_unchecked(f, 3.0, 3);
      return 1.777 * f - 0.888;
    case IsotropicOracle::c4d2: {
      if (f <= 0.5) return 0.0;
      const double x2 = (2.0 * f - 1.0) * (2.0 * f - 1.0);
      return (8.0 - x2) / 8.0 * x2;
    }
  }
  throw error(errc::unknown_oracle, "unknown closed form");
}

inline double closed_form_oracle(std::string_view name, Fidelity F) { return closed_form_oracle(parse_oracle(name), F); }

struct XiDerivatives {
  double first;
  double second;
};

/// Central differences of xi at F with the given step; F +- step must stay
/// inside (1/d, 1].
inline XiDerivatives xi_derivatives(Fidelity F, QParam q, int d, double step = 1e-5) {
  const double f = F.value();
  if (!(f - step > 1.0 / d) || f + step > 1.0)
    throw error(errc::domain_error, "F +- step must lie in (1/d, 1]", f);
  const double lo = detail::xi_unchecked(f - step, q, d);
  const double mid = detail::xi_unchecked(f, q, d);
  const double hi = detail::xi_unchecked(f + step, q, d);
  return {(hi - lo) / (2.0 * step), (hi - 2.0 * mid + lo) / (step * step)};
}

}  // namespace qconc
