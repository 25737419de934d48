#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aiecon/engine.hpp"
#include "aiecon/policy.hpp"

namespace aiecon {

struct EpisodeHeader {
  EpisodeConfig config;
  std::uint64_t seed = 0;
  std::string digest;
  std::vector<Coins> build_skill_alone;
  std::vector<Coins> build_skill_together;
  std::vector<std::string> roles;
  std::vector<std::string> languages;
  std::vector<double> utility;  // u at t = 0
  double swf = 0.0;             // swf at t = 0
  std::vector<Coins> coin;
};

struct EpisodeSummary {
  Step steps = 0;
  long masked_replacements = 0;
  std::vector<long> masked_by_agent;
  metrics::Snapshot final;
  double alignment = 0.0;
  std::string world_hash;
  nlohmann::json world;
};

struct EpisodeLog {
  EpisodeHeader header;
  std::vector<StepRecord> steps;
  EpisodeSummary summary;
};

// Drives one episode. A policy answer outside the mask becomes a no-op and
// is counted in the summary.
EpisodeLog run_episode(const EpisodeConfig& config, std::span<const std::unique_ptr<AgentPolicy>> agents,
                       PlannerPolicy& planner, std::uint64_t seed);
// Uses the policies named in config.policy.
EpisodeLog run_episode(const EpisodeConfig& config, std::uint64_t seed);

// Seed of the private stream given to agent i's policy (planner: i = -1).
std::uint64_t policy_seed(std::uint64_t seed, int i);

// JSON Lines: one header, then per step a "step" record followed by a
// "period" record when a tax period closed, then one summary.
nlohmann::json header_json(const EpisodeHeader& h);
nlohmann::json step_json(const StepRecord& r);
nlohmann::json period_json(const PeriodRecord& p, Step t);
nlohmann::json summary_json(const EpisodeSummary& s);
void write_jsonl(std::ostream& out, const EpisodeLog& log);
std::string to_jsonl(const EpisodeLog& log);

EpisodeConfig config_from_header(const nlohmann::json& header);

// CSV exports.
void write_metrics_csv(std::ostream& out, const EpisodeLog& log);
void write_alignment_csv(std::ostream& out, const EpisodeLog& log);
void write_trades_csv(std::ostream& out, const EpisodeLog& log);
void write_periods_csv(std::ostream& out, const EpisodeLog& log);
void write_taxes_csv(std::ostream& out, const EpisodeLog& log);
void write_rewards_csv(std::ostream& out, const EpisodeLog& log);  // t,agent,reward

// Per-agent reward series, [agent][t].
std::vector<std::vector<double>> reward_traces(const EpisodeLog& log);

}  // namespace aiecon
