#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "catsim/metrology.hpp"
#include "catsim/optics.hpp"

using namespace catsim;
using std::numbers::pi;

// mpmath number-basis sums (tests/oracle/derive_values.py)
TEST(Metrology, QfiMatchesOracle) {
  EXPECT_NEAR(qfi_displacement(cat(1.5, 1), cplx(0, 1)), 39.604470065298645519, 1e-11);
  EXPECT_NEAR(qfi_displacement(cat(1.5, 1), 1.0), 3.6044700652986455186, 1e-12);
  EXPECT_NEAR(qfi_displacement(coherent({{0.7, -0.2}}), std::polar(1.0, 0.3)), 4.0, 1e-12);
}

TEST(Metrology, WeakForceParityMatchesOracle) {
  EXPECT_NEAR(weak_force_parity(2.0, 1, 0.1), 0.84150534382432830306, 1e-12);
}

TEST(Metrology, CoherentProbeSitsAtStandardLimit) {
  const auto r = weak_force_bound(0.0, 1);
  EXPECT_EQ(r.regime, Regime::classical);
  EXPECT_NEAR(r.qfi, 4.0, 1e-14);
  EXPECT_NEAR(r.epsilon_min, sql_threshold(), 1e-14);
  EXPECT_NEAR(classical_snr(1.0, 0.3), 0.6, 1e-15);
  EXPECT_NEAR(homodyne_snr(1.0, 0.3), 0.6, 1e-8);
}

TEST(Metrology, GeneratorVarianceMatchesClosedForm) {
  for (double a : {1.0, 2.0, 4.0})
    for (int N : {1, 3, 8}) {
      const double n = a * a;
      const double expect = 4.0 * N * (1.0 + 2 * n + 2 * n * std::tanh(n));
      EXPECT_NEAR(weak_force_bound(a, N).qfi / expect, 1.0, 1e-12);
    }
}

TEST(Metrology, BoundExpressionAndGeneratorForm) {
  EXPECT_DOUBLE_EQ(multimode_bound(4, 16.0), 4 * 65.0);
  const auto r = weak_force_bound(4.0, 4);
  EXPECT_EQ(r.regime, Regime::multimode_cat);
  EXPECT_NEAR(r.epsilon_min_generator * std::sqrt(r.bound_expression), 1.0, 1e-3);
  EXPECT_NEAR(r.epsilon_min_generator, 2 * r.epsilon_min, 1e-15);
  EXPECT_NEAR(mean_photon_exact_even_cat(4.0) / mean_photon_nominal(4.0), 1.0, 1e-12);
}

TEST(Metrology, MultimodeGainIsExactlySqrtN) {
  const double e1 = weak_force_bound(3.0, 1).epsilon_min;
  for (int N = 1; N <= 16; ++N) EXPECT_NEAR(weak_force_bound(3.0, N).epsilon_min * std::sqrt(N), e1, 1e-14 * e1);
}

TEST(Metrology, QfiPropertiesUnderDisplacementAndPhase) {
  // displacement leaves the generator variance unchanged
  const auto c = cat(1.3, -1);
  const double q = qfi_displacement(c, cplx(0, 1));
  EXPECT_NEAR(qfi_displacement(displace(c, 0, {0.4, -0.9}), cplx(0, 1)), q, 1e-11);
  // rotating the state and the direction together changes nothing
  EXPECT_NEAR(qfi_displacement(phase_shift(c, 0, 0.7), std::polar(1.0, pi / 2 + 0.7)), q, 1e-11);
}

TEST(Metrology, DisplacedCatApproximation) {
  for (double e : {1e-3, 1e-2}) EXPECT_GT(fidelity(displaced_cat(2.0, e), displaced_cat_approx(2.0, e)), 1 - 10 * e * e);
}

TEST(Metrology, NportMergeInvertsSplit) {
  EXPECT_NEAR(fidelity(nport_merge(ghz_cat(2.0, 4), 4), cat(2.0, 1)), 1.0, 1e-14);
  const auto s = tensor(nport_split(cat(1.0, -1), 0, 3), coherent({0.3}));
  const auto m = nport_merge(s, 3);
  EXPECT_EQ(m.modes(), 2);
  EXPECT_NEAR(fidelity(m, tensor(cat(1.0, -1), coherent({0.3}))), 1.0, 1e-14);
  EXPECT_THROW(nport_merge(tensor(cat(2.0, 1), coherent({0.3})), 2), std::invalid_argument);
}

TEST(Metrology, ParityOfCats) {
  EXPECT_NEAR(parity_expectation(cat(1.7, 1)), 1.0, 1e-14);
  EXPECT_NEAR(parity_expectation(cat(1.7, -1)), -1.0, 1e-14);
  EXPECT_NEAR(parity_expectation(coherent({1.0})), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(weak_force_parity(2.0, 3, 0.0), 1.0, 1e-14);
}

TEST(Metrology, MonteCarloEstimatorIsUnbiasedAndNearBound) {
  std::mt19937_64 rng(17);
  const auto r = weak_force_experiment(3.0, 2, 0.04, 10000, rng, 1500);
  EXPECT_NEAR(r.estimate_mean, 0.04, 5 * std::sqrt(r.estimate_var / 1500));
  EXPECT_GT(r.saturation, 0.85);
  EXPECT_LT(r.saturation, 1.0 + 5 * std::sqrt(2.0 / 1499));
  EXPECT_LE(r.fisher_readout, r.qfi * (1 + 1e-9));
  std::mt19937_64 r2(1);
  EXPECT_EQ(weak_force_experiment(2.0, 1, 0.0, 10000, r2, 50).estimate_mean, 0.0);
}

TEST(Metrology, RamseyProbabilityAndFisher) {
  for (double t : {0.1, 0.4, 1.2}) {
    EXPECT_NEAR(ramsey_probability(t, 1, false), std::cos(t) * std::cos(t), 1e-15);
    EXPECT_NEAR(ramsey_probability(t, 5, true), std::cos(5 * t) * std::cos(5 * t), 1e-15);
  }
  for (int N = 1; N <= 10; ++N) {
    EXPECT_NEAR(ramsey_fisher(0.3, N, false), 4.0 * N, 1e-8 * N);
    EXPECT_NEAR(ramsey_fisher(0.3, N, true), 4.0 * N * N, 1e-8 * N * N);
  }
  EXPECT_THROW(ramsey_fisher(0.0, 1, false), std::domain_error);
}

TEST(Metrology, RulerPeaksSitAtMultiplesOfPi) {
  const auto f = quantum_ruler(4.0, 1.0, -1.0, 7.0, 2001);
  ASSERT_EQ(f.peaks_theta.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(f.peaks_theta[k], pi * k, 1e-6);
  EXPECT_NEAR(f.spacing_theta, pi, 1e-6);
  EXPECT_NEAR(f.spacing_length, 0.5, 1e-6);
  EXPECT_NEAR(f.visibility, 1.0, 1e-12);
}

TEST(Metrology, RulerWidthMatchesOracleAndScalesInverselyWithAlpha) {
  const auto f4 = quantum_ruler(4.0, 1.0, -1.0, 4.0, 2001);
  EXPECT_NEAR(f4.peak_width_theta, 0.41703240150497201803, 1e-9);
  for (double a : {6.0, 8.0, 10.0}) {
    const auto f = quantum_ruler(a, 1.0, -1.0, 4.0, 4001);
    EXPECT_NEAR(f.peak_width_theta * a / (f4.peak_width_theta * 4.0), 1.0, 2e-3);
  }
}

TEST(Metrology, RulerNeedsTwoPeaks) {
  EXPECT_THROW(quantum_ruler(4.0, 1.0, 0.5, 2.0, 200), RangeError);
  EXPECT_THROW(quantum_ruler(0.0, 1.0, 0.0, 7.0, 200), std::invalid_argument);
}
