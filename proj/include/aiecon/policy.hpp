#pragma once

#include <memory>
#include <vector>

#include "aiecon/engine.hpp"

namespace aiecon {

// Agent decision rule. act() must return an action admitted by obs.mask;
// run_episode replaces anything else with a no-op and counts it.
class AgentPolicy {
 public:
  virtual ~AgentPolicy() = default;
  virtual int act(const AgentObservation& obs, Rng& rng) = 0;
  virtual void feedback(int /*action*/, double /*reward*/) {}
};

class PlannerPolicy {
 public:
  virtual ~PlannerPolicy() = default;
  virtual PlannerAction act(const PlannerObservation& obs, Rng& rng) = 0;
};

// Uniform over unmasked actions.
class RandomPolicy final : public AgentPolicy {
 public:
  int act(const AgentObservation& obs, Rng& rng) override;
};

class NoopPolicy final : public AgentPolicy {
 public:
  int act(const AgentObservation&, Rng&) override { return actions::kNoop; }
};

// Initiates a joint blue build whenever the mask allows it, otherwise idles.
class ScriptedTeachPolicy final : public AgentPolicy {
 public:
  int act(const AgentObservation& obs, Rng& rng) override;
};

// Stateless softmax over per-action preferences, nudged by the reward
// relative to a running mean. Exercises the interface only.
class SoftmaxPolicy final : public AgentPolicy {
 public:
  SoftmaxPolicy(double temperature, double learning_rate);
  int act(const AgentObservation& obs, Rng& rng) override;
  void feedback(int action, double reward) override;

 private:
  double temperature_;
  double learning_rate_;
  std::vector<double> preference_;
  double baseline_ = 0.0;
  long updates_ = 0;
};

// Chooses the ranking for full-utilitarian investment.
struct RankingRule {
  RankingMode mode = RankingMode::Fixed;
  int fixed = 0;
  int at(int period) const { return mode == RankingMode::Fixed ? fixed : period % kNumBallots; }
};

class FlatRatePlanner final : public PlannerPolicy {
 public:
  FlatRatePlanner(int level, RankingRule ranking) : level_(level), ranking_(ranking) {}
  PlannerAction act(const PlannerObservation& obs, Rng& rng) override;

 private:
  int level_;
  RankingRule ranking_;
};

// Cycles through whole bracket vectors, one per tax period.
class SchedulePlanner final : public PlannerPolicy {
 public:
  SchedulePlanner(std::vector<int> levels, RankingRule ranking);
  PlannerAction act(const PlannerObservation& obs, Rng& rng) override;

 private:
  std::vector<int> levels_;
  RankingRule ranking_;
};

std::unique_ptr<AgentPolicy> make_agent_policy(const EpisodeConfig& config, AgentId agent);
std::unique_ptr<PlannerPolicy> make_planner_policy(const EpisodeConfig& config);

}  // namespace aiecon
