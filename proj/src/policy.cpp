#include "aiecon/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace aiecon {

int RandomPolicy::act(const AgentObservation& obs, Rng& rng) {
  std::vector<int> allowed;
  allowed.reserve(obs.mask.size());
  for (std::size_t a = 0; a < obs.mask.size(); ++a) {
    if (obs.mask[a]) allowed.push_back(static_cast<int>(a));
  }
  if (allowed.empty()) return actions::kNoop;
  return allowed[static_cast<std::size_t>(rng.below(allowed.size()))];
}

int ScriptedTeachPolicy::act(const AgentObservation& obs, Rng&) {
  const int teach = actions::build_together(HouseType::Blue);
  return obs.mask.at(static_cast<std::size_t>(teach)) ? teach : actions::kNoop;
}

SoftmaxPolicy::SoftmaxPolicy(double temperature, double learning_rate)
    : temperature_(temperature), learning_rate_(learning_rate), preference_(actions::kCount, 0.0) {}

int SoftmaxPolicy::act(const AgentObservation& obs, Rng& rng) {
  double top = -INFINITY;
  for (std::size_t a = 0; a < preference_.size(); ++a) {
    if (obs.mask[a]) top = std::max(top, preference_[a]);
  }
  std::vector<double> weight(preference_.size(), 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < preference_.size(); ++a) {
    if (!obs.mask[a]) continue;
    weight[a] = std::exp((preference_[a] - top) / temperature_);
    total += weight[a];
  }
  if (!(total > 0.0)) return actions::kNoop;
  double u = rng.uniform01() * total;
  int last = actions::kNoop;
  for (std::size_t a = 0; a < weight.size(); ++a) {
    if (weight[a] == 0.0) continue;
    last = static_cast<int>(a);
    if (u < weight[a]) return last;
    u -= weight[a];
  }
  return last;
}

void SoftmaxPolicy::feedback(int action, double reward) {
  ++updates_;
  baseline_ += (reward - baseline_) / static_cast<double>(updates_);
  preference_.at(static_cast<std::size_t>(action)) += learning_rate_ * (reward - baseline_);
}

PlannerAction FlatRatePlanner::act(const PlannerObservation& obs, Rng&) {
  PlannerAction a;
  a.rate_levels.assign(static_cast<std::size_t>(obs.brackets), level_);
  a.ranking = ranking_.at(obs.period);
  return a;
}

SchedulePlanner::SchedulePlanner(std::vector<int> levels, RankingRule ranking)
    : levels_(std::move(levels)), ranking_(ranking) {
  if (levels_.empty()) throw ConfigError("planner schedule is empty");
}

PlannerAction SchedulePlanner::act(const PlannerObservation& obs, Rng&) {
  const auto width = static_cast<std::size_t>(obs.brackets);
  if (width == 0 || levels_.size() % width != 0) throw ConfigError("planner schedule does not fit the brackets");
  const std::size_t vectors = levels_.size() / width;
  const std::size_t k = static_cast<std::size_t>(obs.period) % vectors;
  PlannerAction a;
  a.rate_levels.assign(levels_.begin() + static_cast<long>(k * width),
                       levels_.begin() + static_cast<long>((k + 1) * width));
  a.ranking = ranking_.at(obs.period);
  return a;
}

std::unique_ptr<AgentPolicy> make_agent_policy(const EpisodeConfig& config, AgentId) {
  const auto& p = config.policy;
  if (p.agent == "random") return std::make_unique<RandomPolicy>();
  if (p.agent == "noop") return std::make_unique<NoopPolicy>();
  if (p.agent == "scripted_teach") return std::make_unique<ScriptedTeachPolicy>();
  if (p.agent == "softmax") return std::make_unique<SoftmaxPolicy>(p.softmax_temperature, p.softmax_learning_rate);
  throw ConfigError("unknown agent policy '" + p.agent + "'");
}

std::unique_ptr<PlannerPolicy> make_planner_policy(const EpisodeConfig& config) {
  const auto& p = config.policy;
  const RankingRule ranking{p.planner_ranking, p.planner_fixed_ranking};
  if (p.planner == "flat") return std::make_unique<FlatRatePlanner>(p.planner_rate_level, ranking);
  if (p.planner == "schedule") return std::make_unique<SchedulePlanner>(p.planner_schedule, ranking);
  throw ConfigError("unknown planner policy '" + p.planner + "'");
}

}  // namespace aiecon
