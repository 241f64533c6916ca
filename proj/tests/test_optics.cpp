#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "catsim/optics.hpp"

using namespace catsim;
using std::numbers::pi;

namespace {

CoherentSuperposition random_state(std::mt19937_64& rng, int modes, int terms, double amax) {
  std::normal_distribution<double> g;
  std::vector<CoherentTerm> t;
  for (int k = 0; k < terms; ++k) {
    std::vector<cplx> a;
    for (int m = 0; m < modes; ++m) a.emplace_back(amax * g(rng) / 2, amax * g(rng) / 2);
    t.push_back({{g(rng), g(rng)}, a});
  }
  return normalize({modes, t});
}

}  // namespace

TEST(Optics, BeamSplitterConvention) {
  const auto out = beamsplitter(coherent({1.0, 0.0}), {0, 1, 0.3});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_LT(std::abs(out.term(0).amps[0] - cplx(std::cos(0.3), 0)), 1e-15);
  EXPECT_LT(std::abs(out.term(0).amps[1] - cplx(0, std::sin(0.3))), 1e-15);
}

TEST(Optics, BeamSplitterPreservesInnerProducts) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int i = 0; i < 60; ++i) {
    const auto x = random_state(rng, 3, 4, 2.0), y = random_state(rng, 3, 3, 2.0);
    const BeamSplitterSpec bs{i % 3, (i + 1) % 3, u(rng)};
    EXPECT_LT(std::abs(inner_product(beamsplitter(x, bs), beamsplitter(y, bs)) - inner_product(x, y)), 1e-13);
  }
}

TEST(Optics, BeamSplitterAnglesCompose) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 30; ++i) {
    const auto s = random_state(rng, 2, 3, 2.0);
    const auto a = beamsplitter(beamsplitter(s, {0, 1, 0.2 * i}), {0, 1, 0.1});
    const auto b = beamsplitter(s, {0, 1, 0.2 * i + 0.1});
    EXPECT_NEAR(fidelity(a, b), 1.0, 1e-13);
  }
}

TEST(Optics, PhaseShiftPeriodAndCatParity) {
  const auto c = cat(1.4, 1), o = cat(1.4, -1);
  EXPECT_NEAR(fidelity(phase_shift(c, 0, 2 * pi), c), 1.0, 1e-14);
  // |a> -> |-a> leaves the even cat alone and flips the sign of the odd one
  EXPECT_NEAR(inner_product(c, phase_shift(c, 0, pi)).real(), 1.0, 1e-14);
  EXPECT_NEAR(inner_product(o, phase_shift(o, 0, pi)).real(), -1.0, 1e-14);
}

TEST(Optics, DisplacementOfVacuumAndInverse) {
  const cplx beta(0.4, -1.1);
  const auto d = displace(vacuum(1), 0, beta);
  EXPECT_LT(std::abs(inner_product(coherent({beta}), d) - 1.0), 1e-14);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    const auto s = random_state(rng, 2, 5, 2.0);
    const auto back = displace(displace(s, i % 2, beta), i % 2, -beta);
    EXPECT_LT(std::abs(inner_product(s, back) - 1.0), 1e-13);
  }
}

TEST(Optics, DisplacementsComposeWithWeylPhase) {
  const cplx b(0.3, 0.7), c(-0.5, 0.2);
  const auto s = cat(1.2, 1);
  const auto lhs = displace(displace(s, 0, c), 0, b);
  const auto rhs = scale(displace(s, 0, b + c), std::polar(1.0, std::imag(b * std::conj(c))));
  EXPECT_LT(std::abs(inner_product(rhs, lhs) - 1.0), 1e-13);
}

TEST(Optics, PhysicalDisplacementConvergesWithStrongOscillator) {
  const auto s = cat(1.0, 1);
  const cplx beta(0.0, 0.2);
  const auto ideal = displace(s, 0, beta);
  double prev = 1.0;
  for (double strong : {10.0, 100.0, 1000.0}) {
    const double inf = 1.0 - fidelity(ideal, displace_physical(s, 0, beta, strong));
    EXPECT_LT(inf, prev);
    prev = inf;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Optics, NportTreeMatchesDirectSplit) {
  const auto s = cat(2.0, 1);
  for (int N : {2, 4, 8}) EXPECT_NEAR(fidelity(nport_split(s, 0, N), nport_split_tree(s, 0, N)), 1.0, 1e-13);
  const auto split = nport_split(coherent({2.0}), 0, 4);
  ASSERT_EQ(split.modes(), 4);
  for (const auto& a : split.term(0).amps) EXPECT_LT(std::abs(a - cplx(1.0, 0)), 1e-15);
}

TEST(Optics, BellResourceFromSplitCat) {
  for (double a : {1.0, 2.0, 3.0}) EXPECT_GT(fidelity(bell_cat_resource(a), bell_cat(a, 1)), 1 - 1e-12);
}

TEST(Optics, BellCatOverlaps) {
  // only the two even-parity states overlap, by sech(2 a^2); the odd pair cancels exactly
  for (double a : {0.7, 2.0})
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) {
        const bool even_pair = (i == 1 && j == 3) || (i == 3 && j == 1);
        const double expect = i == j ? 1.0 : (even_pair ? 1.0 / std::cosh(2 * a * a) : 0.0);
        EXPECT_NEAR(std::abs(inner_product(bell_cat(a, i), bell_cat(a, j))), expect, 1e-14);
      }
  EXPECT_THROW(bell_cat(1.0, 5), std::invalid_argument);
}

TEST(Optics, GhzCatCarriesSplitAmplitude) {
  const auto g = ghz_cat(2.0, 4);
  EXPECT_EQ(g.modes(), 4);
  EXPECT_NEAR(squared_norm(g), 1.0, 1e-14);
  EXPECT_NEAR(fidelity(g, nport_split(cat(2.0, 1), 0, 4)), 1.0, 1e-14);
}
