#include "test_util.hpp"

#include <gtest/gtest.h>

#include <functional>
#include <vector>

namespace qconc {
namespace {

SchmidtSpectrum spectrum(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return SchmidtSpectrum(v);
}

SchmidtSpectrum uniform(int d) { return SchmidtSpectrum(RealVector::Constant(d, 1.0 / d)); }

/// Strictly positive spectra from Haar-random states.
SchmidtSpectrum random_positive_spectrum(int d, std::uint64_t seed) {
  return schmidt_spectrum(random_pure_state({d, d}, seed));
}

TEST(QParam, RejectsBelowTwo) {
  EXPECT_THROW(QParam(1.99), error);
  EXPECT_THROW(QParam(std::nan("")), error);
  EXPECT_NO_THROW(QParam(2.0));
}

TEST(QConcurrencePure, KnownValues) {
  for (double q : {2.0, 2.5, 3.0, 7.0}) {
    EXPECT_NEAR(q_concurrence_pure(spectrum({1.0, 0.0}), QParam(q)), 0.0, 1e-15);
    for (int d : {2, 3, 5}) EXPECT_NEAR(q_concurrence_pure(uniform(d), QParam(q)), 1.0 - std::pow(d, 1.0 - q), 1e-14);
  }
  EXPECT_NEAR(q_concurrence_pure(spectrum({0.75, 0.25}), QParam(2)), 3.0 / 8.0, 1e-15);
}

TEST(QConcurrencePure, RangeProperty) {
  for (int d : {2, 3, 4})
    for (std::uint64_t seed = 0; seed < 100; ++seed)
      for (double q : {2.0, 2.7, 4.0}) {
        const double c = q_concurrence_pure(random_positive_spectrum(d, seed), QParam(q));
        EXPECT_GE(c, 0.0);
        EXPECT_LE(c, max_q_concurrence(d, q) + 1e-14);
      }
}

TEST(FRatio, KnownValues) {
  for (double q : {2.0, 3.3, 5.0}) {
    EXPECT_NEAR(f_ratio(uniform(3), QParam(q), 3), 1.0, 1e-14);
    EXPECT_NEAR(f_ratio(spectrum({1.0, 0.0}), QParam(q), 2), 0.0, 1e-15);
  }
  EXPECT_NEAR(f_ratio(uniform(2), QParam(2), 2), 1.0, 1e-15);
  EXPECT_NEAR(f_ratio(uniform(2), QParam(3), 2), 1.0, 1e-15);
}

TEST(GDq, KnownValues) {
  for (int d : {2, 3, 4}) EXPECT_NEAR(g_dq(uniform(d), QParam(3.1), d), 0.0, 1e-15);

  // direct evaluation for (0.9, 0.1), d = 2, q = 3
  const double sum_q = 0.729 + 0.001;
  const double sum_q_log = 0.729 * std::log(0.9) + 0.001 * std::log(0.1);
  const double expected = sum_q_log * (0.25 - 1.0) - (1.0 - sum_q) * 0.25 * std::log(2.0);
  EXPECT_GT(expected, 0.0);
  EXPECT_NEAR(g_dq(spectrum({0.9, 0.1}), QParam(3), 2), expected, 1e-15);

  EXPECT_GE(g_dq(spectrum({0.5, 0.3, 0.2}), QParam(2), 3), 0.0);

  try {
    g_dq(spectrum({1.0, 0.0}), QParam(3), 2);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::nonpositive_lambda);
  }
}

// The sign claim for d >= 3 does not hold for every spectrum: close to a
// product state with two equal minor weights G_dq dips below zero at q = 2,
// so f(q) briefly decreases.
TEST(GDq, NegativeNearProductQutrit) {
  const SchmidtSpectrum s = spectrum({0.9, 0.05, 0.05});
  EXPECT_LT(g_dq(s, QParam(2), 3), -1e-4);
  EXPECT_LT(f_ratio(s, QParam(2.01), 3), f_ratio(s, QParam(2), 3));
  // Theorem-1 still holds for this state.
  const DensityMatrix rho = projector(testing::schmidt_form({3, 3}, s.lambdas()));
  EXPECT_LE(theorem1_lower_bound(rho, QParam(2)).value.value(), q_concurrence_pure(s, QParam(2)));
}

TEST(CriticalS, RootOfCurvatureCondition) {
  const double s = critical_s();
  EXPECT_NEAR(s, 2.4721, 5e-5);
  EXPECT_LT(detail::qubit_curvature(2.0), 0.0);
  EXPECT_GT(detail::qubit_curvature(3.0), 0.0);
  EXPECT_LT(std::abs(detail::qubit_curvature(s)), 1e-10);
  EXPECT_EQ(critical_s(), detail::critical_s_bisect());
}

TEST(Corollary1, Scaling) {
  EXPECT_DOUBLE_EQ(corollary1_bound(0.3, 3.0, QParam(3.0), 3), 0.3);
  EXPECT_DOUBLE_EQ(corollary1_bound(0.0, 2.0, QParam(5.0), 4), 0.0);

  const SchmidtSpectrum s = spectrum({0.5, 0.3, 0.2});
  const double c2 = q_concurrence_pure(s, QParam(2));
  EXPECT_NEAR(c2, 0.62, 1e-14);
  const double bound = corollary1_bound(c2, 2.0, QParam(3), 3);
  EXPECT_LE(bound, q_concurrence_pure(s, QParam(3)));

  for (const std::function<void()>& bad : std::vector<std::function<void()>>{[] { corollary1_bound(0.1, 2.2, QParam(3), 2); },  // h < s at d = 2
                   [] { corollary1_bound(0.1, 3.0, QParam(2.5), 3); },  // q < h
                   [] { corollary1_bound(0.1, 2.0, QParam(2.0), 1); }}) {
    try {
      bad();
      FAIL();
    } catch (const error& e) {
      EXPECT_EQ(e.code(), errc::regime_violation);
    }
  }
  EXPECT_THROW(corollary1_bound(0.99, 2.0, QParam(3), 3), error);
}

TEST(Regime, TotalOverQAndD) {
  const double s = critical_s();
  EXPECT_EQ(bound_regime(QParam(2.0), 3), BoundRegime::GeneralD);
  EXPECT_EQ(bound_regime(QParam(2.0), 7), BoundRegime::GeneralD);
  EXPECT_EQ(bound_regime(QParam(3.0), 2), BoundRegime::Qubit3Plus);
  EXPECT_EQ(bound_regime(QParam(s), 2), BoundRegime::QubitSRange);
  EXPECT_EQ(bound_regime(QParam(2.9), 2), BoundRegime::QubitSRange);
  EXPECT_EQ(bound_regime(QParam(2.0), 2), BoundRegime::QubitGap);
  EXPECT_EQ(bound_regime(QParam(2.47), 2), BoundRegime::QubitGap);
  EXPECT_THROW(bound_regime(QParam(2.0), 1), error);
}

TEST(Theorem1, IsotropicClosedForms) {
  for (double f : {0.55, 0.75, 0.9, 1.0}) {
    const auto b = theorem1_lower_bound(isotropic_state(Fidelity(f), 2), QParam(3));
    EXPECT_EQ(b.regime, BoundRegime::Qubit3Plus);
    EXPECT_NEAR(b.value.value(), 0.75 * (2 * f - 1) * (2 * f - 1), 1e-10);
  }
  EXPECT_NEAR(theorem1_lower_bound(isotropic_state(Fidelity(0.75), 2), QParam(3)).value.value(), 0.1875, 1e-10);
  for (double f : {0.4, 0.6, 0.8, 1.0}) {
    const auto b = theorem1_lower_bound(isotropic_state(Fidelity(f), 3), QParam(3));
    EXPECT_NEAR(b.value.value(), 2.0 / 9.0 * (3 * f - 1) * (3 * f - 1), 1e-10);
  }
}

TEST(Theorem1, ProductStateAndRegimes) {
  const DensityMatrix prod = projector(testing::basis_state({3, 3}, 1, 2));
  EXPECT_NEAR(theorem1_lower_bound(prod, QParam(2.5)).value.value(), 0.0, 1e-20);

  const DensityMatrix bell = projector(testing::bell());
  const auto gap = theorem1_lower_bound(bell, QParam(2.2));
  EXPECT_EQ(gap.regime, BoundRegime::QubitGap);
  EXPECT_FALSE(gap.value.has_value());

  const double s = critical_s();
  const auto mid = theorem1_lower_bound(bell, QParam(2.8));
  EXPECT_EQ(mid.regime, BoundRegime::QubitSRange);
  EXPECT_NEAR(mid.value.value(), (1 - std::pow(2.0, -1.8)) / (2 - std::pow(2.0, 2 - s)), 1e-10);
  EXPECT_LE(mid.value.value(), q_concurrence_pure(schmidt_spectrum(testing::bell()), QParam(2.8)));
}

TEST(PriorBound, IsotropicClosedForms) {
  for (double f : {0.6, 0.8, 1.0}) {
    const double x = 2 * f - 1;
    EXPECT_NEAR(prior_lower_bound(isotropic_state(Fidelity(f), 2), QParam(3)),
                (2 * f + 1) * (2 * f + 1) * x * x / 12.0, 1e-10);
    const double y = 3 * f - 1;
    EXPECT_NEAR(prior_lower_bound(isotropic_state(Fidelity(f), 3), QParam(3)),
                (3 * f + 1) * (3 * f + 1) * y * y / 72.0, 1e-10);
  }
  EXPECT_NEAR(prior_lower_bound(maximally_mixed({3, 3}), QParam(3)), 0.0, 1e-20);
}

TEST(BoundReport, IsotropicAndPureCases) {
  const BoundReport iso = bound_report(isotropic_state(Fidelity(0.8), 3), QParam(3));
  ASSERT_TRUE(iso.theorem1_bound);
  EXPECT_GT(*iso.theorem1_bound, iso.prior_bound);
  EXPECT_DOUBLE_EQ(iso.best_lower, *iso.theorem1_bound);
  EXPECT_FALSE(iso.upper_estimate);

  BoundOptions opts;
  opts.upper_iterations = 20;
  const BoundReport bell = bound_report(projector(testing::bell()), QParam(3), opts);
  EXPECT_NEAR(bell.best_lower, 0.75, 1e-10);
  EXPECT_NEAR(*bell.upper_estimate, 0.75, 1e-10);

  const BoundReport prod = bound_report(projector(testing::basis_state({2, 3}, 0, 0)), QParam(4));
  EXPECT_NEAR(prod.best_lower, 0.0, 1e-20);
  EXPECT_NEAR(prod.prior_bound, 0.0, 1e-20);
  EXPECT_NEAR(*prod.theorem1_bound, 0.0, 1e-20);

  const BoundReport gap = bound_report(projector(testing::bell()), QParam(2));
  EXPECT_EQ(gap.regime, BoundRegime::QubitGap);
  EXPECT_FALSE(gap.theorem1_bound);
  EXPECT_DOUBLE_EQ(gap.best_lower, gap.prior_bound);
}

TEST(ConvexRoofUpperBound, PureInputIsExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const PureState psi = random_pure_state({3, 2}, seed);
    const double exact = q_concurrence_pure(psi, QParam(2.5));
    EXPECT_NEAR(convex_roof_upper_bound(projector(psi), QParam(2.5), 1, seed), exact, 1e-10);
  }
}

TEST(ConvexRoofUpperBound, SeparableMixtureReachesZero) {
  // Orthogonal product states: the eigenvectors are the product vectors.
  ComplexMatrix m = ComplexMatrix::Zero(6, 6);
  m(0, 0) = 0.5;                  // |00>
  m(4, 4) = 0.3;                  // |11>
  m(5, 5) = 0.2;                  // |12>
  const DensityMatrix rho = validate_density(m, {2, 3});
  EXPECT_LE(convex_roof_upper_bound(rho, QParam(3), 50, 1), 1e-6);
}

TEST(ConvexRoofUpperBound, MonotoneAndThreadIndependent) {
  const DensityMatrix rho = random_density({3, 3}, 3, 42);
  const QParam q(3);
  double prev = std::numeric_limits<double>::infinity();
  for (int it : {0, 1, 5, 20, 80}) {
    const double v = convex_roof_upper_bound(rho, q, it, 9);
    EXPECT_LE(v, prev);
    prev = v;
  }
  EXPECT_EQ(convex_roof_upper_bound(rho, q, 64, 9, 1), convex_roof_upper_bound(rho, q, 64, 9, 3));
  EXPECT_GE(prev, bound_report(rho, q).best_lower - 1e-8);
}

TEST(QConcurrenceProperties, MonotoneFAndSignOfG) {
  const double s = critical_s();
  // d = 3 has near-product counterexamples, see GDq.NegativeNearProductQutrit.
  for (int d : {2, 4}) {
    const double q_lo = d == 2 ? s : 2.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const SchmidtSpectrum lam = random_positive_spectrum(d, 10'000 + seed);
      ASSERT_GT(lam.lambdas().minCoeff(), 0.0);
      double prev_f = -1.0;
      for (int k = 0; k <= 100; ++k) {
        const QParam q(q_lo + (6.0 - q_lo) * k / 100.0);
        const double f = f_ratio(lam, q, d);
        const double g = g_dq(lam, q, d);
        EXPECT_GE(f - prev_f, -1e-10) << d << " seed " << seed;
        EXPECT_GE(g, -1e-10) << d << " seed " << seed;
        prev_f = f;
      }
    }
  }
}

TEST(QConcurrenceProperties, DerivativeOfFMatchesG) {
  const double h = 1e-5;
  for (int d : {2, 3, 4})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SchmidtSpectrum lam = random_positive_spectrum(d, 300 + seed);
      for (double q : {2.1, 2.6, 3.5, 5.0}) {
        const double fd = (f_ratio(lam, QParam(q + h), d) - f_ratio(lam, QParam(q - h), d)) / (2 * h);
        const double denom = 1.0 - std::pow(double(d), 1.0 - q);
        EXPECT_NEAR(fd, g_dq(lam, QParam(q), d) / (denom * denom), 1e-6);
      }
    }
}

TEST(QConcurrenceProperties, QubitChainIdentities) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SchmidtSpectrum lam = random_positive_spectrum(2, 700 + seed);
    const double c2 = q_concurrence_pure(lam, QParam(2));
    EXPECT_NEAR(q_concurrence_pure(lam, QParam(3)), 1.5 * c2, 1e-10);
    for (double q : {3.0, 3.5, 5.0, 8.0})
      EXPECT_GE(q_concurrence_pure(lam, QParam(q)), (1 - std::pow(2.0, 1 - q)) * 2 * c2 - 1e-12);
  }
}

TEST(QConcurrenceProperties, Theorem1BelowPureValue) {
  for (int d : {2, 3, 4})
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const PureState psi = random_pure_state({d, d + static_cast<int>(seed % 2)}, 5000 + seed);
      const DensityMatrix rho = projector(psi);
      for (double q : {2.0, 2.5, 3.0, 4.5}) {
        const auto b = theorem1_lower_bound(rho, QParam(q));
        if (!b.value) continue;
        EXPECT_LE(*b.value, q_concurrence_pure(psi, QParam(q)) + 1e-10);
      }
    }
}

TEST(QConcurrenceProperties, BoundsLocalUnitaryInvariant) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DensityMatrix rho = random_density({3, 3}, 2, seed);
    Rng rng(seed + 77);
    const DensityMatrix moved = conjugate_local(rho, haar_unitary(rng, 3), haar_unitary(rng, 3));
    const BoundReport a = bound_report(rho, QParam(3));
    const BoundReport b = bound_report(moved, QParam(3));
    EXPECT_NEAR(*a.theorem1_bound, *b.theorem1_bound, 1e-8);
    EXPECT_NEAR(a.prior_bound, b.prior_bound, 1e-8);
  }
}

}  // namespace
}  // namespace qconc
