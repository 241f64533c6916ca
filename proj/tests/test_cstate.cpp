#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "catsim/cstate.hpp"
#include "catsim/serialize.hpp"
#include "catsim/table.hpp"

using namespace catsim;

namespace {

CoherentSuperposition random_state(std::mt19937_64& rng, int modes, int terms, double amax) {
  std::normal_distribution<double> g;
  std::vector<CoherentTerm> t;
  for (int k = 0; k < terms; ++k) {
    std::vector<cplx> a;
    for (int m = 0; m < modes; ++m) a.emplace_back(amax * g(rng) / 2, amax * g(rng) / 2);
    t.push_back({{g(rng), g(rng)}, a});
  }
  return {modes, t};
}

}  // namespace

// mpmath number-basis sums (tests/oracle/derive_values.py)
TEST(Cstate, OverlapMatchesOracle) {
  const cplx v = coherent_overlap({1, 2}, {-0.5, 0.3});
  EXPECT_NEAR(v.real(), 0.020473168749040228097, 1e-15);
  EXPECT_NEAR(v.imag(), 0.073746451268579311387, 1e-15);
}

TEST(Cstate, UnnormalizedCatNormMatchesOracle) {
  const CoherentSuperposition s{1, {{1.0, {1.3}}, {1.0, {-1.3}}}};
  EXPECT_NEAR(squared_norm(s), 2.0680949094691986683, 1e-14);
}

TEST(Cstate, OverlapModulusIsGaussianInDistance) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    const cplx a(g(rng), g(rng)), b(g(rng), g(rng));
    EXPECT_NEAR(std::abs(coherent_overlap(a, b)), std::exp(-std::norm(a - b) / 2), 1e-14);
  }
}

TEST(Cstate, NonorthogonalityOfQubitBasis) {
  for (double a : {0.5, 1.0, 2.0, 3.0})
    EXPECT_NEAR(std::norm(coherent_overlap(a, -a)) / std::exp(-4 * a * a), 1.0, 1e-12);
  EXPECT_LT(std::norm(coherent_overlap(2.0, -2.0)), 1e-6);
}

TEST(Cstate, GramIsHermitianPositiveSemidefinite) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_state(rng, 1 + i % 3, 1 + i % 8, 2.0);
    const auto G = gram_matrix(s);
    EXPECT_LT((G - G.adjoint()).norm(), 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
    EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
    for (Eigen::Index k = 0; k < G.rows(); ++k) EXPECT_NEAR(G(k, k).real(), 1.0, 1e-15);
  }
}

TEST(Cstate, MultimodeOverlapIsProductOfSingleModes) {
  const std::vector<cplx> a{{0.3, 1}, {-2, 0.1}, {0, 0}}, b{{1, -1}, {0.5, 0.5}, {2, 2}};
  cplx p = 1.0;
  for (int m = 0; m < 3; ++m) p *= coherent_overlap(a[m], b[m]);
  EXPECT_LT(std::abs(multimode_overlap(a, b) - p), 1e-15);
}

TEST(Cstate, NormalizeAndZeroNorm) {
  const auto s = normalize({1, {{2.0, {0.4}}, {cplx(0, 1), {-0.4}}}});
  EXPECT_NEAR(squared_norm(s), 1.0, 1e-14);
  const CoherentSuperposition empty{2, {}};
  EXPECT_EQ(squared_norm(empty), 0.0);
  EXPECT_THROW(normalize(empty), ZeroNormError);
  EXPECT_THROW(normalize({1, {{1.0, {0.5}}, {-1.0, {0.5}}}}), ZeroNormError);
}

TEST(Cstate, RejectsMalformedTerms) {
  EXPECT_THROW((CoherentSuperposition{2, {{1.0, {0.5}}}}), std::invalid_argument);
  EXPECT_THROW((CoherentSuperposition{0, {}}), std::invalid_argument);
}

TEST(Cstate, MergePreservesTheVector) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40; ++i) {
    auto s = random_state(rng, 2, 4, 2.0);
    auto terms = s.terms();
    // duplicate one term and nudge another below the merge tolerance
    terms.push_back(terms[0]);
    terms.push_back({terms[1].coeff, {terms[1].amps[0] + cplx(3e-13, 0), terms[1].amps[1]}});
    const CoherentSuperposition t{2, terms};
    const auto m = merge_terms(t);
    EXPECT_LE(m.size(), s.size());
    EXPECT_LT(std::abs(inner_product(t, t) - inner_product(m, t)), 1e-10 * squared_norm(t));
  }
}

TEST(Cstate, AddScaleTensorAreLinear) {
  std::mt19937_64 rng(3);
  const auto x = random_state(rng, 2, 3, 1.5), y = random_state(rng, 2, 2, 1.5), z = random_state(rng, 1, 2, 1.0);
  const cplx c(0.3, -0.8);
  EXPECT_LT(std::abs(inner_product(z, z) * inner_product(x, x) - squared_norm(tensor(x, z))), 1e-12);
  const auto xy = add(scale(x, c), y);
  const cplx lhs = inner_product(x, xy);
  const cplx rhs = c * inner_product(x, x) + inner_product(x, y);
  EXPECT_LT(std::abs(lhs - rhs), 1e-12);
}

TEST(Cstate, ContractModeAgainstCoherentBra) {
  const auto s = tensor(coherent({{0.5, 0.2}}), cat(1.1, 1));
  // <b| on mode 0 leaves <b|0.5+0.2i> cat
  const cplx b(0.1, -0.3);
  const auto r = contract_mode(s, 0, [&](cplx a) { return coherent_overlap(b, a); });
  EXPECT_EQ(r.modes(), 1);
  EXPECT_NEAR(std::abs(inner_product(cat(1.1, 1), r)), std::abs(coherent_overlap(b, {0.5, 0.2})), 1e-14);
}

TEST(Cstate, CatParityNorm) {
  EXPECT_NEAR(squared_norm(cat(1.0, 1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(inner_product(cat(1.0, 1), cat(1.0, -1))), 0.0, 1e-15);
  EXPECT_NEAR(fidelity(cat(0.8, 1), cat(0.8, 1)), 1.0, 1e-14);
}

TEST(Serialize, RoundTripIsExact) {
  std::mt19937_64 rng(2);
  const auto s = random_state(rng, 3, 5, 2.0);
  const auto t = parse_state(dump_state(s));
  ASSERT_EQ(t.modes(), s.modes());
  ASSERT_EQ(t.size(), s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    EXPECT_EQ(t.term(k).coeff, s.term(k).coeff);
    EXPECT_EQ(t.term(k).amps, s.term(k).amps);
  }
  EXPECT_EQ(dump_state(t), dump_state(s));
}

TEST(Table, SeventeenDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300}) EXPECT_EQ(std::stod(fmt17(v)), v);
  Table t({"a", "b"});
  t.add_row(std::vector<double>{0.1, 2});
  t.add_row(std::vector<std::string>{"x", "nan"});
  std::ostringstream tsv, js;
  t.write(tsv);
  t.write_records(js);
  EXPECT_EQ(tsv.str(), "a\tb\n0.10000000000000001\t2\nx\tnan\n");
  EXPECT_EQ(js.str(), "{\"a\":0.10000000000000001,\"b\":2}\n{\"a\":\"x\",\"b\":\"nan\"}\n");
  EXPECT_THROW(t.add_row(std::vector<double>{1.0}), std::invalid_argument);
}
