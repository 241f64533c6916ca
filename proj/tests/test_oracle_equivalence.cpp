#include <gtest/gtest.h>

#include <set>

#include "catsim_app/audit.hpp"

using namespace catsim::app;

TEST(OracleEquivalence, RandomizedSuiteAgreesWithFockBasis) {
  AuditConfig cfg;
  cfg.cases = 260;
  cfg.seed = 20240611;
  const auto cases = run_audit(cfg, 4);
  ASSERT_EQ(cases.size(), 260u);
  std::set<std::string> seen;
  for (const auto& c : cases) {
    seen.insert(c.property);
    EXPECT_TRUE(c.pass) << c.property << " case " << c.index << " error " << c.error;
    EXPECT_LE(c.modes, 3);
    EXPECT_LE(c.terms, 8);
  }
  EXPECT_EQ(seen.size(), audit_properties().size());
}

TEST(OracleEquivalence, CasesAreReproducible) {
  AuditConfig cfg;
  for (int i : {0, 5, 17}) {
    const auto a = run_audit_case(cfg, i), b = run_audit_case(cfg, i);
    EXPECT_EQ(a.error, b.error);
    EXPECT_EQ(a.modes, b.modes);
  }
}

TEST(OracleEquivalence, AbsurdToleranceIsReportedAsFailure) {
  AuditConfig cfg;
  cfg.tol = 1e-300;
  cfg.cases = 13;
  int fails = 0;
  for (const auto& c : run_audit(cfg)) fails += c.pass ? 0 : 1;
  EXPECT_GT(fails, 0);
}
