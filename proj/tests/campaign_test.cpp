// Copyright 2026 The mtrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "mtrace/campaign.hpp"

namespace mtrace {
namespace {

TEST(ParseN, RangesListsAndErrors) {
  EXPECT_EQ(parse_n_values("3..6"), (std::vector<int>{3, 4, 5, 6}));
  EXPECT_EQ(parse_n_values("3,5, 8"), (std::vector<int>{3, 5, 8}));
  EXPECT_EQ(parse_n_values("3..4,7"), (std::vector<int>{3, 4, 7}));
  EXPECT_THROW(parse_n_values("6..3"), Error);
  EXPECT_THROW(parse_n_values("three"), Error);
}

TEST(Config, KeyValueFileOverridesDefaults) {
  std::istringstream in(
      "# comment\n"
      "campaign.suite = inequalities\n"
      "campaign.n = 3..5   # trailing comment\n"
      "campaign.trials = 7\n"
      "tol.rtol = 1e-6\n"
      "stahl.t_grid = 10, 1000\n"
      "output.format = csv\n");
  const CampaignConfig cfg = load_config(in);
  EXPECT_EQ(cfg.checks, suite_checks("inequalities"));
  EXPECT_EQ(cfg.n_values, (std::vector<int>{3, 4, 5}));
  EXPECT_EQ(cfg.trials, 7u);
  ASSERT_TRUE(cfg.rtol.has_value());
  EXPECT_DOUBLE_EQ(*cfg.rtol, 1e-6);
  EXPECT_FALSE(cfg.atol.has_value());
  EXPECT_EQ(cfg.stahl_t_grid, (std::vector<double>{10.0, 1000.0}));
  EXPECT_EQ(cfg.format, ReportFormat::Csv);
}

TEST(Config, Errors) {
  std::istringstream unknown("campaign.colour = red\n");
  try {
    (void)load_config(unknown);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConfigError);
  }
  std::istringstream malformed("campaign.trials\n");
  EXPECT_THROW((void)load_config(malformed), Error);
  std::istringstream bad_number("campaign.d = two\n");
  EXPECT_THROW((void)load_config(bad_number), Error);
  try {
    (void)load_config_file("/nonexistent/mtrace.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(Config, ValidationCatchesOversizedLayouts) {
  CampaignConfig cfg;
  cfg.checks = {"main_inequality"};
  cfg.n_values = {3, 11};
  EXPECT_THROW(validate(cfg), Error);
  cfg.n_values = {3, 10};
  EXPECT_NO_THROW(validate(cfg));
  cfg.checks = {"no_such_check"};
  try {
    validate(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownCheck);
  }
}

TEST(Registry, SuitesPartitionTheChecks) {
  const auto ids = suite_checks("identities");
  const auto ineq = suite_checks("inequalities");
  EXPECT_EQ(suite_checks("all").size(), ids.size() + ineq.size());
  EXPECT_NE(std::find(ineq.begin(), ineq.end(), "main_inequality"), ineq.end());
  EXPECT_NE(std::find(ids.begin(), ids.end(), "key_lemma"), ids.end());
  EXPECT_THROW((void)suite_checks("everything"), Error);
  EXPECT_EQ(find_check("nope"), nullptr);
}

CampaignConfig small_config() {
  CampaignConfig cfg;
  cfg.checks = suite_checks("all");
  cfg.n_values = {3, 4, 5};
  cfg.trials = 3;
  cfg.seed = 42;
  cfg.threads = 4;
  return cfg;
}

TEST(Campaign, SmallRunPasses) {
  const CampaignSummary s = run_campaign(small_config());
  EXPECT_TRUE(s.all_pass()) << format_summary(s);
  std::size_t total = 0;
  for (const auto& c : s.checks) total += c.pass + c.fail;
  EXPECT_EQ(total, s.reports.size());
}

TEST(Campaign, DeterministicAcrossThreadCounts) {
  CampaignConfig one = small_config();
  one.threads = 1;
  std::ostringstream a, b, c;
  write_jsonl(a, run_campaign(one));
  write_jsonl(b, run_campaign(small_config()));
  write_jsonl(c, run_campaign(small_config()));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(b.str(), c.str());
}

TEST(Campaign, SeedChangesTrials) {
  CampaignConfig other = small_config();
  other.seed = 43;
  const auto s1 = run_campaign(small_config());
  const auto s2 = run_campaign(other);
  ASSERT_EQ(s1.reports.size(), s2.reports.size());
  EXPECT_NE(s1.reports.front().seed, s2.reports.front().seed);
}

TEST(Campaign, ZeroToleranceProducesFailures) {
  CampaignConfig cfg = small_config();
  cfg.checks = {"sbt_lemma"};
  cfg.atol = 0.0;
  cfg.rtol = 0.0;
  EXPECT_FALSE(run_campaign(cfg).all_pass());
}

TEST(Reports, JsonlHasConfigTrialsAndSummary) {
  CampaignConfig cfg = small_config();
  cfg.checks = {"golden_thompson", "key_lemma"};
  const CampaignSummary s = run_campaign(cfg);
  std::ostringstream out;
  write_jsonl(out, s);
  std::istringstream lines(out.str());
  std::vector<nlohmann::json> records;
  for (std::string line; std::getline(lines, line);) records.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(records.size(), s.reports.size() + 2);
  EXPECT_EQ(records.front()["record"], "config");
  EXPECT_EQ(records.front()["campaign.seed"], "42");
  EXPECT_EQ(records[1]["record"], "trial");
  EXPECT_EQ(records[1]["check_id"], "golden_thompson");
  EXPECT_EQ(records[1]["kind"], "inequality");
  EXPECT_EQ(records.back()["record"], "summary");
  EXPECT_EQ(records.back()["failures"], 0);
}

TEST(Reports, CsvEchoesConfig) {
  CampaignConfig cfg = small_config();
  cfg.checks = {"beta_normalization"};
  std::ostringstream out;
  write_csv(out, run_campaign(cfg));
  const std::string text = out.str();
  EXPECT_NE(text.find("# campaign.trials=3\n"), std::string::npos);
  EXPECT_NE(text.find("check_id,grid_points,pass,fail,worst_rel_gap\n"), std::string::npos);
  EXPECT_NE(text.find("beta_normalization,1,3,0,"), std::string::npos);
}

TEST(Reports, DefaultPathHonoursEnvironment) {
  ::setenv(kOutputDirEnv, "/tmp/mtrace-out", 1);
  EXPECT_EQ(default_output_path(ReportFormat::Csv), "/tmp/mtrace-out/mtrace-report.csv");
  ::unsetenv(kOutputDirEnv);
  EXPECT_EQ(default_output_path(ReportFormat::Jsonl), "./mtrace-report.jsonl");
}

TEST(Explain, MainInequalityAtSix) {
  const std::string text = explain("main_inequality", 6);
  EXPECT_NE(text.find("pi = {2->2, 3->5, 4->3, 5->4}"), std::string::npos);
  EXPECT_NE(text.find("Thue-Morse alpha_2..alpha_5 = 0110"), std::string::npos);
  EXPECT_NE(text.find("conj(A_3)^-1"), std::string::npos);
}

TEST(Explain, FourMatrixFormAndIdentityPermutation) {
  const std::string text = explain("main_inequality", 4);
  EXPECT_NE(text.find("(identity)"), std::string::npos);
  EXPECT_NE(text.find("four-matrix form"), std::string::npos);
}

TEST(Explain, StaticFormulaAndUnknownCheck) {
  EXPECT_NE(explain("sbt_lemma").find("T_{A2^-1}(A1)"), std::string::npos);
  try {
    (void)explain("bogus");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownCheck);
  }
}

}  // namespace
}  // namespace mtrace
