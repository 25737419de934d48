// Command-line front end: run, sweep, fit, replay.
//
// Exit codes: 0 success, 2 configuration or input error, 3 runtime
// invariant violation, 4 replay mismatch.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "aiecon/episode.hpp"
#include "aiecon/iafit.hpp"
#include "aiecon/replay.hpp"
#include "aiecon/sweep.hpp"

namespace fs = std::filesystem;
using namespace aiecon;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct Overrides {
  std::string variant;
  std::string system;
  std::string objective;
};

void apply_overrides(EpisodeConfig& c, const Overrides& o) {
  if (!o.variant.empty()) apply_setting(c, KeyValue{"variant", o.variant, 0});
  if (!o.system.empty()) apply_setting(c, KeyValue{"system", o.system, 0});
  if (!o.objective.empty()) apply_setting(c, KeyValue{"objective", o.objective, 0});
  c.validate();
}

std::string describe(const ConfigError& e, const std::string& file) {
  std::string where = file;
  if (e.line() > 0) where += ":" + std::to_string(e.line());
  return where + ": " + e.what();
}

template <typename Fn>
std::string render(Fn&& fn, const EpisodeLog& log) {
  std::ostringstream out;
  fn(out, log);
  return out.str();
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const fs::path& out,
            const Overrides& overrides) {
  EpisodeConfig config;
  try {
    config = load_config(config_path);
    apply_overrides(config, overrides);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << describe(e, config_path) << '\n';
    return kExitConfig;
  }
  if (seed) config.seed = *seed;

  EpisodeLog log;
  try {
    log = run_episode(config, config.seed);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }

  // Everything is rendered before the output directory is touched.
  const std::map<std::string, std::string> files{
      {"episode.jsonl", to_jsonl(log)},
      {"metrics.csv", render(write_metrics_csv, log)},
      {"alignment.csv", render(write_alignment_csv, log)},
      {"trades.csv", render(write_trades_csv, log)},
      {"periods.csv", render(write_periods_csv, log)},
      {"taxes.csv", render(write_taxes_csv, log)},
      {"rewards.csv", render(write_rewards_csv, log)},
  };
  fs::create_directories(out);
  for (const auto& [name, content] : files) write_atomic(out / name, content);

  const auto& f = log.summary.final;
  std::cout << "digest " << log.header.digest << " seed " << log.header.seed << '\n'
            << "steps " << log.summary.steps << " alignment " << format_double(log.summary.alignment) << " eq "
            << format_double(f.eq) << " prod " << format_double(f.prod) << " maximin " << format_double(f.maximin)
            << '\n';
  if (log.summary.masked_replacements > 0) {
    std::cout << "masked actions replaced by no-op: " << log.summary.masked_replacements << '\n';
  }
  std::cout << "wrote " << files.size() << " files to " << out.string() << '\n';
  return 0;
}

int cmd_sweep(const std::string& manifest_path, int jobs, const fs::path& out, const Overrides& overrides) {
  Manifest m;
  try {
    m = load_manifest(manifest_path);
    if (!overrides.variant.empty()) m.variants = {*parse_variant(overrides.variant)};
    if (!overrides.system.empty()) m.systems = {*parse_governing_system(overrides.system)};
    if (!overrides.objective.empty()) m.objectives = {*parse_objective(overrides.objective)};
  } catch (const ConfigError& e) {
    std::cerr << "error: " << describe(e, manifest_path) << '\n';
    return kExitConfig;
  } catch (const std::bad_optional_access&) {
    std::cerr << "error: unknown --variant, --system or --objective value\n";
    return kExitConfig;
  }
  if (expand(m).empty()) {
    std::cerr << "warning: manifest " << manifest_path << " defines no runs; nothing to do\n";
    return 0;
  }
  const auto runs = run_sweep_parallel(m, jobs);
  write_sweep_outputs(runs, m, out);
  int failed = 0;
  for (const auto& r : runs) {
    if (!r.ok) {
      ++failed;
      std::cerr << "run " << r.spec.index << " failed: " << r.error << '\n';
    }
  }
  std::cout << runs.size() - static_cast<std::size_t>(failed) << " of " << runs.size() << " runs succeeded; wrote "
            << out.string() << '\n';
  return failed ? kExitInvariant : 0;
}

// t,agent,reward rows into per-agent series.
iafit::Traces read_reward_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  std::map<long, std::vector<std::pair<long, double>>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || (lineno == 1 && line.rfind("t,", 0) == 0)) continue;
    std::stringstream ss(line);
    std::string t, agent, reward;
    if (!std::getline(ss, t, ',') || !std::getline(ss, agent, ',') || !std::getline(ss, reward)) {
      throw ConfigError("expected t,agent,reward", lineno);
    }
    try {
      rows[std::stol(agent)].emplace_back(std::stol(t), std::stod(reward));
    } catch (const std::exception&) {
      throw ConfigError("unparsable reward row", lineno);
    }
  }
  iafit::Traces traces;
  long expected_agent = 0;
  for (auto& [agent, series] : rows) {
    if (agent != expected_agent++) throw ConfigError("agent ids must be 0..N-1; missing agent " + std::to_string(expected_agent - 1));
    std::sort(series.begin(), series.end());
    iafit::Series s;
    for (std::size_t k = 0; k < series.size(); ++k) {
      if (series[k].first != static_cast<long>(k)) {
        throw ConfigError("agent " + std::to_string(agent) + " has a gap or duplicate at t=" +
                          std::to_string(series[k].first));
      }
      s.push_back(series[k].second);
    }
    traces.push_back(std::move(s));
  }
  return traces;
}

int cmd_fit(const std::string& log_path, const std::string& rewards_path, double gamma, double lambda,
            const std::string& window, bool inclusive, const std::string& out_path) {
  iafit::Traces traces;
  try {
    if (!log_path.empty()) {
      std::ifstream in(log_path);
      if (!in) throw ConfigError("cannot open '" + log_path + "'");
      const ParsedLog log = parse_log(in);
      const std::size_t n = log.header.at("utility").size();
      traces.assign(n, {});
      for (const auto& s : log.steps) {
        const auto r = s.at("rewards").get<std::vector<double>>();
        if (r.size() != n) throw ConfigError("step " + s.at("t").dump() + " has " + std::to_string(r.size()) + " rewards");
        for (std::size_t i = 0; i < n; ++i) traces[i].push_back(r[i]);
      }
    } else {
      traces = read_reward_csv(rewards_path);
    }
    iafit::validate(traces);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << describe(e, log_path.empty() ? rewards_path : log_path) << '\n';
    return kExitConfig;
  } catch (const LogParseError& e) {
    std::cerr << "error: " << log_path << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  iafit::FitOptions opts;
  opts.gamma = gamma;
  opts.lambda = lambda;
  opts.grid = iafit::Grid::standard(inclusive);
  std::size_t length = 0, stride = 0;
  if (!window.empty()) {
    const auto colon = window.find(':');
    try {
      length = std::stoul(window.substr(0, colon));
      stride = colon == std::string::npos ? length : std::stoul(window.substr(colon + 1));
    } catch (const std::exception&) {
      std::cerr << "error: --window expects LENGTH or LENGTH:STRIDE\n";
      return kExitConfig;
    }
  }

  std::ostringstream csv;
  csv << "agent,window_start,window_length,alpha,beta,residual,flag\n";
  try {
    for (std::size_t i = 0; i < traces.size(); ++i) {
      std::vector<iafit::FitResult> fits;
      if (length) fits = iafit::fit_windows(traces, traces, i, opts, length, stride);
      else fits.push_back(iafit::fit(traces, i, opts));
      for (const auto& f : fits) {
        csv << f.agent << ',' << f.window_start << ',' << f.window_length << ',' << format_double(f.alpha) << ','
            << format_double(f.beta) << ',' << format_double(f.residual) << ',' << f.flag() << '\n';
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (out_path.empty()) std::cout << csv.str();
  else write_atomic(out_path, csv.str());
  return 0;
}

int cmd_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open '" << path << "'\n";
    return kExitConfig;
  }
  const ReplayReport report = replay(in);
  if (report.status == ReplayStatus::Verified) {
    std::cout << "ok: " << report.message << '\n';
  } else {
    std::cerr << (report.status == ReplayStatus::Mismatch ? "mismatch: " : "error: ") << report.message << '\n';
    if (report.first_divergent_step) std::cerr << "first divergent step: " << *report.first_divergent_step << '\n';
  }
  return report.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gather-trade-build economy simulator with taxation, voting and emergent language"};
  app.require_subcommand(1);

  Overrides overrides;
  const auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--variant", overrides.variant, "communication | teaching");
    sub->add_option("--system", overrides.system, "full_libertarian | semi_libertarian_utilitarian | full_utilitarian");
    sub->add_option("--objective", overrides.objective, "inverse_income | eq_times_prod");
  };

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run one episode and write its log and CSV exports");
  run->add_option("--config", config_path, "Config file (key = value)")->required();
  run->add_option("--seed", seed, "Seed, overriding the config");
  run->add_option("--out", out_dir, "Output directory")->required();
  add_overrides(run);

  std::string manifest_path;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run an experiment grid from a manifest");
  sweep->add_option("manifest,--config", manifest_path, "Manifest file")->required();
  sweep->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_dir, "Output directory")->required();
  add_overrides(sweep);

  std::string log_path, rewards_path, window, fit_out;
  double gamma = 0.99, lambda = 0.5;
  bool inclusive = false;
  auto* fit = app.add_subcommand("fit", "Fit inequity-aversion coefficients per agent");
  auto* log_opt = fit->add_option("--log", log_path, "Episode log (JSON Lines)");
  auto* csv_opt = fit->add_option("--rewards", rewards_path, "Reward CSV with columns t,agent,reward");
  log_opt->excludes(csv_opt);
  fit->add_option("--gamma", gamma, "Discount of the reward trace")->check(CLI::Range(0.0, 1.0));
  fit->add_option("--lambda", lambda, "Trace decay")->check(CLI::Range(0.0, 1.0));
  fit->add_option("--window", window, "Sliding window LENGTH or LENGTH:STRIDE");
  fit->add_flag("--inclusive-grid", inclusive, "Include alpha = 0, 5 and beta = 0, 1 in the grid");
  fit->add_option("--out", fit_out, "Output CSV (default stdout)");

  std::string replay_path;
  auto* rep = app.add_subcommand("replay", "Verify an episode log by re-derivation and re-simulation");
  rep->add_option("log", replay_path, "Episode log")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir, overrides);
    if (sweep->parsed()) return cmd_sweep(manifest_path, jobs, out_dir, overrides);
    if (fit->parsed()) {
      if (log_path.empty() && rewards_path.empty()) {
        std::cerr << "error: fit needs --log or --rewards\n";
        return kExitConfig;
      }
      return cmd_fit(log_path, rewards_path, gamma, lambda, window, inclusive, fit_out);
    }
    if (rep->parsed()) return cmd_replay(replay_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  }
  return 1;
}
