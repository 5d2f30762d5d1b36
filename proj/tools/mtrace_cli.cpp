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

// mtrace: verify multivariate trace identities and inequalities on random
// positive definite matrices.
//
//   mtrace verify --suite identities --n 3..6 --d 2 --trials 100 --seed 1
//   mtrace explain --check main_inequality --n 6
//   mtrace perm --n 6

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtrace/campaign.hpp"

namespace {

struct VerifyOptions {
  std::string config_file;
  std::optional<std::string> suite;
  std::vector<std::string> checks;
  std::optional<std::string> n;
  std::optional<long> d;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<unsigned> threads;
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
  std::optional<double> atol;
  std::optional<double> rtol;
  bool quiet = false;
};

int run_verify(const VerifyOptions& o) {
  mtrace::CampaignConfig cfg;
  if (!o.config_file.empty()) cfg = mtrace::load_config_file(o.config_file, cfg);
  if (o.suite) cfg.checks = mtrace::suite_checks(*o.suite);
  if (!o.checks.empty()) cfg.checks = o.checks;
  if (o.n) cfg.n_values = mtrace::parse_n_values(*o.n);
  if (o.d) cfg.d = *o.d;
  if (o.trials) cfg.trials = *o.trials;
  if (o.seed) cfg.seed = *o.seed;
  if (o.format) cfg.format = mtrace::parse_format(*o.format);
  if (o.out) cfg.output_path = *o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.lambda_min) cfg.lambda.min = *o.lambda_min;
  if (o.lambda_max) cfg.lambda.max = *o.lambda_max;
  if (o.atol) cfg.atol = *o.atol;
  if (o.rtol) cfg.rtol = *o.rtol;
  if (cfg.output_path.empty()) cfg.output_path = mtrace::default_output_path(cfg.format);

  const mtrace::CampaignSummary summary = mtrace::run_campaign(cfg);
  mtrace::write_report(cfg.output_path, cfg.format, summary);
  if (!o.quiet) {
    std::cout << mtrace::format_summary(summary) << "report: " << cfg.output_path << "\n";
  }
  return summary.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of multivariate trace inequalities"};
  app.set_version_flag("--version", std::string(mtrace::kVersion));
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run a seeded verification campaign");
  verify->add_option("--config", vo.config_file, "Key-value config file (flags override it)")->check(CLI::ExistingFile);
  verify->add_option("--suite", vo.suite, "identities | inequalities | all")
      ->check(CLI::IsMember({"identities", "inequalities", "all"}));
  verify->add_option("--check", vo.checks, "Run only these check ids (repeatable)");
  verify->add_option("--n", vo.n, "Matrix counts, e.g. 3..6 or 3,5");
  verify->add_option("--d", vo.d, "Local dimension")->check(CLI::Range(2, 512));
  verify->add_option("--trials", vo.trials, "Seeded trials per grid point")->check(CLI::PositiveNumber);
  verify->add_option("--seed", vo.seed, "Base seed");
  verify->add_option("--out", vo.out, "Report path (default: $" + std::string(mtrace::kOutputDirEnv) + "/mtrace-report.*)");
  verify->add_option("--format", vo.format, "jsonl | csv")->check(CLI::IsMember({"jsonl", "csv"}));
  verify->add_option("--threads", vo.threads, "Worker threads (0 = all cores)");
  verify->add_option("--lambda-min", vo.lambda_min, "Smallest eigenvalue of random matrices");
  verify->add_option("--lambda-max", vo.lambda_max, "Largest eigenvalue of random matrices");
  verify->add_option("--atol", vo.atol, "Override every check's absolute tolerance");
  verify->add_option("--rtol", vo.rtol, "Override every check's relative tolerance");
  verify->add_flag("-q,--quiet", vo.quiet, "Do not print the summary table");

  std::string explain_id;
  std::optional<int> explain_n;
  auto* explain = app.add_subcommand("explain", "Describe a check, its tensor layout and permutation");
  explain->add_option("--check", explain_id, "Check id")->required();
  explain->add_option("--n", explain_n, "Matrix count for layout details")->check(CLI::Range(3, 64));

  int perm_n = 3;
  auto* perm = app.add_subcommand("perm", "Print the middle-matrix permutation and Thue-Morse prefix");
  perm->add_option("--n", perm_n, "Matrix count")->required()->check(CLI::Range(3, 64));

  auto* list = app.add_subcommand("list", "List the available check ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // --help and --version exit 0
  }

  try {
    if (*verify) return run_verify(vo);
    if (*explain) {
      std::cout << mtrace::explain(explain_id, explain_n);
      return 0;
    }
    if (*perm) {
      std::cout << mtrace::permutation_text(perm_n);
      return 0;
    }
    if (*list) {
      for (const auto& c : mtrace::check_registry()) {
        std::cout << c.id << (c.suite == mtrace::Suite::Identities ? "  [identities]  " : "  [inequalities]  ")
                  << c.title << "\n";
      }
      return 0;
    }
  } catch (const mtrace::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
