#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "catsim_app/app.hpp"
#include "catsim_app/audit.hpp"

using namespace catsim::app;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  const int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p.string();
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream is(text);
  std::string l;
  while (std::getline(is, l))
    if (l == line) return true;
  return false;
}

std::vector<std::string> table_rows(const std::string& text) {
  std::istringstream is(text);
  std::vector<std::string> rows;
  std::string l;
  while (std::getline(is, l))
    if (!l.empty() && l[0] != '#') rows.push_back(l);
  return rows;
}

}  // namespace

TEST(Cli, ConfigParserReportsLines) {
  std::istringstream good("# comment\n alpha = 1 2 # trailing\n\nseed=7\n");
  const auto e = parse_config(good, "c.txt");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0].key, "alpha");
  EXPECT_EQ(e[0].value, "1 2");
  EXPECT_EQ(e[1].line, 4);
  std::istringstream dup("seed = 1\nseed = 2\n");
  try {
    parse_config(dup, "c.txt");
    FAIL();
  } catch (const ConfigError& ex) {
    EXPECT_NE(std::string(ex.what()).find("c.txt:2"), std::string::npos);
  }
  std::istringstream bad("just words\n");
  EXPECT_THROW(parse_config(bad, "c.txt"), ConfigError);
}

TEST(Cli, HeaderEchoesVersionSeedAndConfig) {
  const auto r = run_cli({"ramsey", "--n-max", "3", "--seed", "42"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(has_line(r.out, "# catsim 0.1.0"));
  EXPECT_TRUE(has_line(r.out, "# seed 42"));
  EXPECT_TRUE(has_line(r.out, "# config n-max = 3"));
  EXPECT_TRUE(has_line(r.out, "# config theta = 0.29999999999999999"));
  EXPECT_EQ(table_rows(r.out).size(), 4u);
}

TEST(Cli, FlagsOverrideFileOverrideDefaults) {
  const auto cfg = write_temp("catsim_prec.cfg", "theta = 0.2\nstep = 0.001\n");
  const auto r = run_cli({"ramsey", "--config", cfg, "--theta", "0.25", "--n-max", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(has_line(r.out, "# config theta = 0.25"));
  EXPECT_TRUE(has_line(r.out, "# config step = 0.001"));
  EXPECT_TRUE(has_line(r.out, "# config n-max = 2"));
  const auto d = run_cli({"ramsey"});
  EXPECT_TRUE(has_line(d.out, "# config step = 0.0001"));
}

TEST(Cli, ConfigErrorsExitTwoWithLocation) {
  const auto unknown = write_temp("catsim_unknown.cfg", "n-max = 3\nwidth = 2\n");
  auto r = run_cli({"ramsey", "--config", unknown});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("catsim_unknown.cfg:2"), std::string::npos) << r.err;
  const auto badval = write_temp("catsim_badval.cfg", "n-max = three\n");
  r = run_cli({"ramsey", "--config", badval});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("field 'n-max'"), std::string::npos) << r.err;
  const auto range = write_temp("catsim_range.cfg", "\nshots = -5\n");
  r = run_cli({"bell-stats", "--config", range});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("catsim_range.cfg:2"), std::string::npos) << r.err;
  EXPECT_EQ(run_cli({"ramsey", "--n-max", "x"}).code, kConfigError);
  EXPECT_EQ(run_cli({"no-such-experiment"}).code, kConfigError);
  EXPECT_EQ(run_cli({}).code, kConfigError);
  EXPECT_EQ(run_cli({"ramsey", "--format", "xml"}).code, kConfigError);
}

TEST(Cli, BudgetViolationsExitThree) {
  EXPECT_EQ(run_cli({"weak-force", "--trials", "2000000000"}).code, kBudgetError);
  EXPECT_EQ(run_cli({"oracle-audit", "--alpha-max", "6"}).code, kBudgetError);
  EXPECT_EQ(run_cli({"bell-stats", "--shots", "1000000000"}).code, kBudgetError);
}

TEST(Cli, PropertyFailureExitsFour) {
  const auto r = run_cli({"oracle-audit", "--cases", "13", "--tol", "1e-300"});
  EXPECT_EQ(r.code, kPropertyFailure);
  EXPECT_TRUE(has_line(r.out, "# result all_pass = false"));
}

TEST(Cli, OracleAuditSummaryHasOneRowPerProperty) {
  const auto r = run_cli({"oracle-audit", "--alpha-max", "3", "--cases", "26"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_EQ(table_rows(r.out).size(), audit_properties().size() + 1);
}

TEST(Cli, RulerExampleReportsSpacingColumn) {
  const auto r = run_cli({"ruler", "--alpha", "10", "--lambda", "10e-6"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = table_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[0].find("spacing_length"), std::string::npos);
}

TEST(Cli, WeakForceAtZeroForceEstimatesZero) {
  const auto r = run_cli({"weak-force", "--alpha", "2", "--n", "1", "--epsilon", "0", "--repeats", "20"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = table_rows(r.out);
  ASSERT_EQ(rows.size(), 2u);
  std::istringstream head(rows[0]), vals(rows[1]);
  std::string h, v;
  while (std::getline(head, h, '\t') && std::getline(vals, v, '\t'))
    if (h == "estimate_mean") EXPECT_EQ(std::stod(v), 0.0);
}

TEST(Cli, RerunsAreByteIdenticalAcrossThreadCounts) {
  const std::vector<std::vector<std::string>> cmds = {
      {"bell-stats", "--shots", "500", "--alpha-steps", "3"},
      {"weak-force", "--alpha", "2", "3", "--n", "1", "2", "--repeats", "30"},
      {"gate-check", "--alpha-steps", "2", "--cnot-steps", "10", "--rx-trials", "3"},
      {"ruler", "--alpha", "4", "6"},
      {"ramsey"},
      {"oracle-audit", "--cases", "26", "--format", "jsonl"}};
  for (const auto& c : cmds) {
    auto one = c, many = c;
    one.insert(one.end(), {"--seed", "9", "--threads", "1"});
    many.insert(many.end(), {"--seed", "9", "--threads", "4"});
    const auto a = run_cli(one), b = run_cli(one), m = run_cli(many);
    ASSERT_EQ(a.code, kOk) << c[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << c[0];
    EXPECT_EQ(a.out, m.out) << c[0];
  }
}

TEST(Cli, SeedChangesSampledOutput) {
  const auto a = run_cli({"bell-stats", "--shots", "500", "--alpha-steps", "2", "--seed", "1"});
  const auto b = run_cli({"bell-stats", "--shots", "500", "--alpha-steps", "2", "--seed", "2"});
  EXPECT_NE(a.out, b.out);
}

TEST(Cli, OutputFileAndJsonRecords) {
  const auto path = (std::filesystem::temp_directory_path() / "catsim_out.jsonl").string();
  const auto r = run_cli({"ramsey", "--n-max", "2", "--format", "jsonl", "--output", path});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string first;
  std::getline(f, first);
  EXPECT_EQ(first.rfind("{\"catsim\":\"0.1.0\"", 0), 0u) << first;
}

TEST(Cli, HelpExitsZero) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("oracle-audit"), std::string::npos);
}
