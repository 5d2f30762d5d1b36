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

// Campaign orchestration: configuration, seeded parallel execution, reports.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <limits>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "mtrace/checks.hpp"

#ifndef MTRACE_VERSION
#define MTRACE_VERSION "0.0.0"
#endif

namespace mtrace {

inline constexpr const char* kVersion = MTRACE_VERSION;
/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "MTRACE_OUTPUT_DIR";

enum class ReportFormat { Jsonl, Csv };

struct CampaignConfig {
  std::vector<std::string> checks = suite_checks("identities");
  std::vector<int> n_values{3, 4, 5, 6};
  Index d = 2;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  LambdaRange lambda;
  QuadratureConfig quad;
  std::optional<double> atol;  // overrides every check's default when set
  std::optional<double> rtol;
  std::vector<double> stahl_t_grid{1e2, 1e4, 1e7};
  std::string output_path;     // empty: no report file
  ReportFormat format = ReportFormat::Jsonl;
  unsigned threads = 0;        // 0: hardware concurrency
};

struct CheckSummary {
  std::string check_id;
  std::size_t grid_points = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  double worst_rel_gap = 0.0;
};

struct CampaignSummary {
  std::vector<CheckSummary> checks;
  std::vector<TrialReport> reports;  // ordered by (check, grid point, trial)
  double runtime_seconds = 0.0;
  std::string version = kVersion;
  std::vector<std::pair<std::string, std::string>> config_echo;

  std::size_t failures() const {
    std::size_t f = 0;
    for (const auto& c : checks) f += c.fail;
    return f;
  }
  bool all_pass() const { return failures() == 0; }
};

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T value{};
  is >> value;
  if (is.fail() || !is.eof()) throw Error(ErrorCode::ConfigError, "bad value '" + text + "' for " + key);
  return value;
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) os << ",";
    if constexpr (std::is_floating_point_v<T>) os << format_double(v[i]);
    else os << v[i];
  }
  return os.str();
}

}  // namespace detail

/// "3..6", "3,5,6" or "4".
inline std::vector<int> parse_n_values(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : detail::split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(detail::parse_number<int>("n", part));
      continue;
    }
    const int lo = detail::parse_number<int>("n", detail::trim(part.substr(0, dots)));
    const int hi = detail::parse_number<int>("n", detail::trim(part.substr(dots + 2)));
    if (hi < lo) throw Error(ErrorCode::ConfigError, "empty n range '" + part + "'");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  if (out.empty()) throw Error(ErrorCode::ConfigError, "no n values in '" + text + "'");
  return out;
}

inline ReportFormat parse_format(const std::string& text) {
  if (text == "jsonl") return ReportFormat::Jsonl;
  if (text == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::ConfigError, "unknown report format '" + text + "'");
}

/// Plain "key = value" lines; '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    out[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

inline void apply_setting(CampaignConfig& cfg, const std::string& key, const std::string& value) {
  using detail::parse_number;
  if (key == "campaign.suite") cfg.checks = suite_checks(value);
  else if (key == "campaign.checks") cfg.checks = detail::split(value, ',');
  else if (key == "campaign.n") cfg.n_values = parse_n_values(value);
  else if (key == "campaign.d") cfg.d = parse_number<Index>(key, value);
  else if (key == "campaign.trials") cfg.trials = parse_number<std::size_t>(key, value);
  else if (key == "campaign.seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "campaign.lambda_min") cfg.lambda.min = parse_number<double>(key, value);
  else if (key == "campaign.lambda_max") cfg.lambda.max = parse_number<double>(key, value);
  else if (key == "campaign.threads") cfg.threads = parse_number<unsigned>(key, value);
  else if (key == "quad.real_line.half_width") cfg.quad.real_line_half_width = parse_number<double>(key, value);
  else if (key == "quad.real_line.nodes") cfg.quad.real_line_nodes = parse_number<std::size_t>(key, value);
  else if (key == "quad.half_line.nodes") cfg.quad.half_line_nodes = parse_number<std::size_t>(key, value);
  else if (key == "tol.atol") cfg.atol = parse_number<double>(key, value);
  else if (key == "tol.rtol") cfg.rtol = parse_number<double>(key, value);
  else if (key == "stahl.t_grid") {
    cfg.stahl_t_grid.clear();
    for (const auto& t : detail::split(value, ',')) cfg.stahl_t_grid.push_back(parse_number<double>(key, t));
  } else if (key == "output.path") cfg.output_path = value;
  else if (key == "output.format") cfg.format = parse_format(value);
  else throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
}

inline CampaignConfig load_config(std::istream& in, CampaignConfig cfg = {}) {
  for (const auto& [key, value] : parse_key_values(in)) apply_setting(cfg, key, value);
  return cfg;
}

inline CampaignConfig load_config_file(const std::string& path, CampaignConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
  return load_config(in, std::move(cfg));
}

/// Default report location: $MTRACE_OUTPUT_DIR/mtrace-report.<ext>, else the
/// working directory.
inline std::string default_output_path(ReportFormat format) {
  const char* dir = std::getenv(kOutputDirEnv);
  const std::filesystem::path base = (dir != nullptr && *dir != '\0') ? dir : ".";
  return (base / (format == ReportFormat::Jsonl ? "mtrace-report.jsonl" : "mtrace-report.csv")).string();
}

inline std::vector<std::pair<std::string, std::string>> config_echo(const CampaignConfig& cfg) {
  using detail::format_double;
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("version", kVersion);
  e.emplace_back("campaign.checks", detail::join(cfg.checks));
  e.emplace_back("campaign.n", detail::join(cfg.n_values));
  e.emplace_back("campaign.d", std::to_string(cfg.d));
  e.emplace_back("campaign.trials", std::to_string(cfg.trials));
  e.emplace_back("campaign.seed", std::to_string(cfg.seed));
  e.emplace_back("campaign.lambda_min", format_double(cfg.lambda.min));
  e.emplace_back("campaign.lambda_max", format_double(cfg.lambda.max));
  e.emplace_back("quad.real_line.half_width", format_double(cfg.quad.real_line_half_width));
  e.emplace_back("quad.real_line.nodes", std::to_string(cfg.quad.real_line_nodes));
  e.emplace_back("quad.half_line.nodes", std::to_string(cfg.quad.half_line_nodes));
  e.emplace_back("tol.atol", cfg.atol ? format_double(*cfg.atol) : "default");
  e.emplace_back("tol.rtol", cfg.rtol ? format_double(*cfg.rtol) : "default");
  e.emplace_back("stahl.t_grid", detail::join(cfg.stahl_t_grid));
  return e;
}

inline void validate(const CampaignConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
  if (cfg.checks.empty()) throw Error(ErrorCode::ConfigError, "no checks selected");
  if (cfg.d < 2) throw Error(ErrorCode::ConfigError, "d must be >= 2");
  if (cfg.stahl_t_grid.empty()) throw Error(ErrorCode::ConfigError, "stahl.t_grid is empty");
  try {
    detail::validate(cfg.lambda);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  for (const auto& id : cfg.checks) {
    const CheckSpec& spec = require_check(id);
    if (!spec.uses_n) continue;
    for (int n : cfg.n_values) {
      if (n < spec.min_n || n < 3) continue;
      try {
        (void)build_layout(n, cfg.d);
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, "check " + id + ": " + e.what());
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Execution

namespace detail {

struct Job {
  const CheckSpec* spec;
  GridPoint point;
  std::size_t grid_index;
  std::size_t trial;
  Tolerance tol;
};

inline TrialReport run_job(const CheckContext& ctx, const Job& job, std::uint64_t base_seed) {
  const std::uint64_t seed =
      mix_seed(mix_seed(mix_seed(base_seed, hash_id(job.spec->id)), job.grid_index), job.trial);
  try {
    TrialReport r = job.spec->run(ctx, job.point, job.tol, seed);
    r.check_id = job.spec->id;
    r.seed = seed;
    r.with("trial", job.trial);
    if (!job.point.label.empty()) r.with("grid", job.point.label);
    return r;
  } catch (const Error& e) {
    TrialReport r;
    r.check_id = job.spec->id;
    r.seed = seed;
    r.tolerance = job.tol;
    r.pass = false;
    r.lhs = r.rhs = r.abs_gap = r.rel_gap = std::numeric_limits<double>::quiet_NaN();
    r.with("error", e.what()).with("trial", job.trial);
    if (job.point.n > 0) r.with("n", job.point.n);
    return r;
  }
}

}  // namespace detail

/// Runs every selected check over its grid and `trials` seeds. The report
/// order depends only on the configuration, never on thread scheduling.
inline CampaignSummary run_campaign(const CampaignConfig& cfg) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();

  CheckContext ctx;
  ctx.d = cfg.d;
  ctx.lambda = cfg.lambda;
  ctx.quad = cfg.quad;
  ctx.beta = beta_rule(cfg.quad);
  ctx.half_line = half_line_rule(cfg.quad);
  ctx.stahl_t_grid = cfg.stahl_t_grid;

  std::vector<detail::Job> jobs;
  CampaignSummary summary;
  for (const auto& id : cfg.checks) {
    const CheckSpec& spec = require_check(id);
    Tolerance tol = spec.tolerance;
    if (cfg.atol) tol.atol = *cfg.atol;
    if (cfg.rtol) tol.rtol = *cfg.rtol;
    const auto grid = spec.grid(cfg.n_values);
    summary.checks.push_back({id, grid.size(), 0, 0, 0.0});
    for (std::size_t g = 0; g < grid.size(); ++g)
      for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({&spec, grid[g], g, t, tol});
  }

  summary.reports.resize(jobs.size());
  unsigned workers = cfg.threads > 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(jobs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      summary.reports[i] = detail::run_job(ctx, jobs[i], cfg.seed);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (const auto& r : summary.reports) {
    auto it = std::find_if(summary.checks.begin(), summary.checks.end(),
                           [&](const CheckSummary& c) { return c.check_id == r.check_id; });
    if (r.pass) ++it->pass;
    else ++it->fail;
    if (std::isnan(r.rel_gap)) it->worst_rel_gap = std::numeric_limits<double>::infinity();
    else it->worst_rel_gap = std::max(it->worst_rel_gap, r.rel_gap);
  }
  summary.config_echo = config_echo(cfg);
  summary.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::json to_json(const TrialReport& r) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return nullptr;
  };
  return {{"record", "trial"},
          {"check_id", r.check_id},
          {"kind", r.kind == CheckKind::Identity ? "identity" : "inequality"},
          {"lhs", num(r.lhs)},
          {"rhs", num(r.rhs)},
          {"abs_gap", num(r.abs_gap)},
          {"rel_gap", num(r.rel_gap)},
          {"atol", r.tolerance.atol},
          {"rtol", r.tolerance.rtol},
          {"pass", r.pass},
          {"seed", r.seed},
          {"params", r.params}};
}

/// Config record, one record per trial, then per-check counts. No timings,
/// so identical configurations give byte-identical files.
inline void write_jsonl(std::ostream& out, const CampaignSummary& s) {
  nlohmann::json cfg = {{"record", "config"}};
  for (const auto& [k, v] : s.config_echo) cfg[k] = v;
  out << cfg.dump() << '\n';
  for (const auto& r : s.reports) out << to_json(r).dump() << '\n';
  nlohmann::json sum = {{"record", "summary"}, {"failures", s.failures()}};
  for (const auto& c : s.checks) {
    sum["checks"].push_back(
        {{"check_id", c.check_id}, {"pass", c.pass}, {"fail", c.fail}, {"worst_rel_gap", c.worst_rel_gap}});
  }
  out << sum.dump() << '\n';
}

inline void write_csv(std::ostream& out, const CampaignSummary& s) {
  for (const auto& [k, v] : s.config_echo) out << "# " << k << "=" << v << '\n';
  out << "check_id,grid_points,pass,fail,worst_rel_gap\n";
  for (const auto& c : s.checks) {
    out << c.check_id << ',' << c.grid_points << ',' << c.pass << ',' << c.fail << ','
        << detail::format_double(c.worst_rel_gap) << '\n';
  }
}

inline void write_report(const std::string& path, ReportFormat format, const CampaignSummary& s) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write report '" + path + "'");
  if (format == ReportFormat::Jsonl) write_jsonl(out, s);
  else write_csv(out, s);
  if (!out) throw Error(ErrorCode::IoError, "failed writing report '" + path + "'");
}

/// Human-readable per-check table.
inline std::string format_summary(const CampaignSummary& s) {
  std::ostringstream os;
  os << "mtrace " << s.version << "\n";
  for (const auto& c : s.checks) {
    os << (c.fail == 0 ? "PASS " : "FAIL ") << c.check_id << "  pass=" << c.pass << " fail=" << c.fail
       << " worst_rel_gap=" << c.worst_rel_gap << "\n";
  }
  os << "failures: " << s.failures() << "  runtime: " << s.runtime_seconds << " s\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Explanations

inline std::string permutation_text(int n) {
  const MidPermutation pi = build_permutation(n);
  const ShapeParams shape = shape_params(n);
  std::ostringstream os;
  os << "n = " << n << "  n' = " << shape.n_prime << "  rho = " << shape.rho << "\n";
  os << "pi = " << pi.to_string() << (pi.is_identity() ? "  (identity)" : "") << "\n";
  os << "Thue-Morse alpha_2..alpha_" << n - 1 << " = ";
  for (int a : thue_morse_prefix(static_cast<std::size_t>(n - 2))) os << a;
  os << "\n";
  return os.str();
}

/// Formula under test, plus the tensor layout, permutation and Thue-Morse
/// prefix when n is given (n >= 3).
inline std::string explain(const std::string& check_id, std::optional<int> n = std::nullopt) {
  const CheckSpec& spec = require_check(check_id);
  std::ostringstream os;
  os << spec.id << ": " << spec.title << "\n";
  os << "  " << spec.formula << "\n";
  os << "  tolerance: atol=" << spec.tolerance.atol << " rtol=" << spec.tolerance.rtol << " ("
     << (spec.suite == Suite::Inequalities ? "lhs <= rhs + atol + rtol |rhs|"
                                           : "|lhs - rhs| <= atol + rtol max(|lhs|, |rhs|)")
     << ")\n";
  if (n && *n >= 3) {
    os << "\n" << build_layout(*n, 2).describe();
    os << permutation_text(*n);
    if (*n == 4) {
      os << "four-matrix form: Tr exp(sum log A_k) <= Tr[P_1 T_{(A2 (x) conj A3)^-1}(A1 (x) conj A4)]\n";
    }
  }
  return os.str();
}

}  // namespace mtrace
