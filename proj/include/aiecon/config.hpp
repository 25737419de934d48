#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aiecon/common.hpp"
#include "aiecon/fiscal.hpp"
#include "aiecon/language.hpp"
#include "aiecon/market.hpp"
#include "aiecon/world.hpp"

namespace aiecon {

enum class PlannerObjective : std::uint8_t { InverseIncome, EqTimesProd };

std::string_view to_string(PlannerObjective o);
std::optional<PlannerObjective> parse_objective(std::string_view s);
std::optional<Variant> parse_variant(std::string_view s);

struct LaborCosts {
  double move = 0.21;
  double gather = 0.21;
  double trade = 0.05;
  double build_alone = 2.1;
  double build_together = 3.15;
  double vote = 0.0;
};

enum class JointPayout : std::uint8_t {
  EachOwnSkill,  // every participant earns its own build_skill_together
  Split,         // the initiator's build_skill_together is split between the two
};

enum class PartnerRule : std::uint8_t {
  LeastAligned,  // eligible partner with the lowest pair alignment, then nearest, then lowest id
  Nearest,       // nearest eligible partner, then lowest id
};

struct SkillConfig {
  double pareto_shape = 4.0;
  double min = 10.0;
  double max = 30.0;
  double together_multiplier = 1.5;
  double together_max = 45.0;
};

enum class RankingMode : std::uint8_t { Fixed, RoundRobin };

struct PolicyConfig {
  std::string agent = "random";   // random | noop | scripted_teach | softmax
  std::string planner = "flat";   // flat | schedule
  int planner_rate_level = 2;     // flat planner: rate level applied to every bracket
  std::vector<int> planner_schedule;  // schedule planner: rate levels, one bracket-vector per period, cycled
  RankingMode planner_ranking = RankingMode::Fixed;
  int planner_fixed_ranking = 0;  // ballot index 0..23
  double softmax_temperature = 1.0;
  double softmax_learning_rate = 0.1;
};

struct EpisodeConfig {
  Variant variant = Variant::Communication;
  GoverningSystem system = GoverningSystem::SemiLibertarianUtilitarian;
  PlannerObjective objective = PlannerObjective::EqTimesProd;
  int horizon = 1000;
  int tax_period = 100;
  double eta = 0.5;
  LaborCosts labor;
  Coins small_reward = 1;
  JointPayout joint_payout = JointPayout::EachOwnSkill;
  PartnerRule partner_rule = PartnerRule::LeastAligned;
  SkillConfig skill;
  double gather_skill = 0.2;
  Coins initial_coin = 0;
  WorldConfig world;
  MarketConfig market;
  std::vector<double> tax_cutoffs{0, 10, 25, 50, 100, 200, 400};
  int rate_levels = kDefaultRateLevels;
  RevenueMode revenue_mode = RevenueMode::Redistribute;
  InvestConfig invest;
  PolicyConfig policy;
  std::uint64_t seed = 1;

  int num_agents() const { return world.num_agents; }
  int num_periods() const { return horizon / tax_period; }
  void validate() const;
};

// Ordered key/value pairs as they appear in a config file; values keep their
// literal spelling (quotes stripped from strings).
struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

// Parses `key = value` lines. '#' starts a comment outside quotes; values are
// numbers, bare words, "quoted strings" or [comma, separated, lists].
std::vector<KeyValue> parse_key_values(std::string_view text);
std::vector<KeyValue> read_key_values(const std::string& path);

// Applies one setting; unknown keys and bad values raise ConfigError
// carrying the line number.
void apply_setting(EpisodeConfig& config, const KeyValue& kv);
EpisodeConfig config_from_key_values(const std::vector<KeyValue>& kvs, EpisodeConfig base = {});
EpisodeConfig load_config(const std::string& path);

// Every effective setting in canonical order and spelling.
std::vector<std::pair<std::string, std::string>> canonical_settings(const EpisodeConfig& config);
std::string config_digest(const EpisodeConfig& config);  // 16 hex digits

std::string format_double(double v);

}  // namespace aiecon
