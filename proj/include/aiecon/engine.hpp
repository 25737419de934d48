#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aiecon/common.hpp"
#include "aiecon/config.hpp"
#include "aiecon/fiscal.hpp"
#include "aiecon/language.hpp"
#include "aiecon/market.hpp"
#include "aiecon/metrics.hpp"
#include "aiecon/world.hpp"

namespace aiecon {

// Flat agent action space:
//   0         no-op
//   1..4      move up, down, left, right
//   5..92     trade: 5 + material * 22 + side * 11 + price
//   93, 94    build alone red, blue
//   95, 96    build together red, blue
//   97..120   vote for ballot 0..23
namespace actions {

inline constexpr int kNoop = 0;
inline constexpr int kMoveBase = 1;
inline constexpr int kTradeBase = kMoveBase + 4;
inline constexpr int kBuildAloneBase = kTradeBase + kNumMaterials * 2 * kNumPrices;
inline constexpr int kBuildTogetherBase = kBuildAloneBase + 2;
inline constexpr int kVoteBase = kBuildTogetherBase + 2;
inline constexpr int kCount = kVoteBase + kNumBallots;
static_assert(kCount == 121);

enum class Kind : std::uint8_t { Noop, Move, Trade, BuildAlone, BuildTogether, Vote };

struct Decoded {
  Kind kind = Kind::Noop;
  Direction direction = Direction::Up;
  Material material = Material::Wood;
  Side side = Side::Bid;
  int price = 0;
  HouseType house = HouseType::Red;
  int ballot = 0;
};

Decoded decode(int action);
int move(Direction d);
int trade(Material m, Side s, int price);
int build_alone(HouseType h);
int build_together(HouseType h);
int vote(int ballot);
std::string describe(int action);

}  // namespace actions

struct AgentState {
  AgentId id = 0;
  Holdings holdings;
  double labor = 0.0;
  Coins build_skill_alone = 10;
  Coins build_skill_together = 15;
  double gather_skill = 0.0;
  LanguageMap language;
  Role role = Role::Plain;
  std::optional<Ballot> ballot;  // latest vote in the current tax period
};

// Per-cell channels of the spatial observation tensors.
namespace channel {
inline constexpr int kBlocked = 0;     // padding outside the map or an obstacle
inline constexpr int kDeposit = 1;     // 1..4: units of wood, stone, iron, soil
inline constexpr int kRedHouse = 5;
inline constexpr int kBlueHouse = 6;
inline constexpr int kOwnHouse = 7;
inline constexpr int kAgent = 8;       // id + 1 of the occupant
inline constexpr int kSelf = 9;
inline constexpr int kCount = 10;
}  // namespace channel

inline constexpr int kWindow = 11;

struct MarketView {
  // [material][side][price]
  std::array<std::array<std::array<int, kNumPrices>, 2>, kNumMaterials> own{};
  std::array<std::array<std::array<int, kNumPrices>, 2>, kNumMaterials> others{};
  std::array<double, kNumMaterials> average_price{};
  std::array<std::array<int, kNumPrices>, kNumMaterials> trade_counts{};
};

struct TaxView {
  std::vector<double> rates;
  std::vector<double> cutoffs;
  double period_progress = 0.0;
  std::vector<Coins> previous_incomes_sorted;
};

struct AgentObservation {
  AgentId agent = 0;
  Step t = 0;
  std::vector<std::int16_t> spatial;  // channel-major, kWindow x kWindow per channel
  Holdings holdings;
  double labor = 0.0;
  Coins build_skill_alone = 0;
  Coins build_skill_together = 0;
  double gather_skill = 0.0;
  Role role = Role::Plain;
  LanguageMap language;
  MarketView market;
  TaxView tax;
  double own_marginal_rate = 0.0;
  std::vector<std::uint8_t> mask;  // one entry per action
};

struct PlannerObservation {
  Step t = 0;
  int width = 0;
  int height = 0;
  std::vector<std::int16_t> spatial;  // channel-major, full public map
  std::vector<Holdings> holdings;
  std::vector<double> labor;
  MarketView market;  // `others` holds everyone's orders
  TaxView tax;
  std::vector<Coins> previous_incomes;
  std::vector<double> previous_marginal_rates;
  std::vector<int> votes;  // latest ballot index per agent, -1 when none
  std::vector<LanguageMap> languages;
  std::vector<Role> roles;
  int rate_levels = kDefaultRateLevels;
  int brackets = 0;
  int period = 0;
};

struct PlannerAction {
  std::vector<int> rate_levels;  // one per bracket
  std::optional<int> ranking;    // ballot index, used by the full-utilitarian system
};

struct BuildEvent {
  AgentId agent = 0;
  HouseType house = HouseType::Red;
  bool built = false;
  Coins income = 0;
};

struct JointBuildEvent {
  AgentId initiator = 0;
  AgentId partner = -1;  // -1 when no eligible partner exists
  HouseType house = HouseType::Red;
  JointBuildOutcome outcome;
};

struct PeriodRecord {
  int period = 0;
  std::vector<double> rates;
  TaxPeriodOutcome taxes;
  std::vector<int> votes;
  BordaResult borda;
  InvestmentResult investment;
  std::array<double, kNumMaterials> regen_before{};
};

struct StepRecord {
  Step t = 0;
  std::vector<int> actions;
  std::optional<PlannerAction> planner_action;
  std::vector<double> rewards;
  double planner_reward = 0.0;
  std::vector<Trade> trades;
  std::vector<BuildEvent> builds;
  std::vector<JointBuildEvent> joint_builds;
  std::vector<std::string> languages;
  double alignment = 0.0;
  std::vector<Coins> coin;  // wealth: free plus escrowed coin
  std::vector<double> labor;
  std::vector<std::array<std::int64_t, kNumMaterials>> inventories;  // free plus escrowed units
  std::vector<double> utility;
  double swf = 0.0;
  metrics::Snapshot metrics;
  std::optional<PeriodRecord> period;
};

struct StepResult {
  StepRecord record;
  std::vector<AgentObservation> observations;
  std::optional<PlannerObservation> planner_observation;  // present when the planner acts next
  bool done = false;
};

// Isoelastic utility minus labor. Coin below metrics::kMinCoin is clamped
// when eta > 1.
double utility(double coin, double labor, double eta);
// Marginal reward between consecutive utilities (or social welfare values).
inline double agent_reward(double u_now, double u_prev) { return u_now - u_prev; }
inline double planner_reward(double swf_now, double swf_prev) { return swf_now - swf_prev; }

// The planner's objective evaluated on wealth and utilities.
double social_welfare(PlannerObjective objective, std::span<const double> coin, std::span<const double> util);

// Clipped-Pareto draw rounded to whole coins.
Coins sample_build_skill(const SkillConfig& skill, Rng& rng);

// One episode's state machine. Not thread-safe; distinct environments are
// independent.
class Environment {
 public:
  Environment(EpisodeConfig config, std::uint64_t seed);

  const EpisodeConfig& config() const { return config_; }
  Step t() const { return t_; }
  bool done() const { return t_ >= config_.horizon; }
  bool needs_planner_action() const { return !done() && t_ % config_.tax_period == 0; }

  const GridWorld& world() const { return world_; }
  const OrderBook& book() const { return book_; }
  std::span<const AgentState> agents() const { return agents_; }
  int num_agents() const { return static_cast<int>(agents_.size()); }
  const TaxSchedule& schedule() const { return schedule_; }
  std::span<const double> utilities() const { return utilities_; }
  double swf() const { return swf_; }
  std::vector<LanguageMap> languages() const;
  std::vector<double> coins() const;

  std::vector<std::uint8_t> action_mask(AgentId a) const;
  AgentObservation observe_agent(AgentId a) const;
  PlannerObservation observe_planner() const;

  // Advances one step. Throws std::invalid_argument for a malformed joint
  // action: wrong size, out-of-range or masked action, or a missing or
  // malformed planner action at a period start.
  StepResult step(std::span<const int> joint_actions, const std::optional<PlannerAction>& planner = std::nullopt);

  // Partner an initiator would be matched with for a joint build, or -1.
  AgentId choose_partner(AgentId initiator) const;

 private:
  std::vector<Holdings> holdings_view() const;
  void write_back(const std::vector<Holdings>& h);
  void apply_planner(const PlannerAction& action);
  BuildEvent do_build_alone(AgentId a, HouseType h);
  JointBuildEvent do_build_together(AgentId a, HouseType h);
  double compute_swf(std::span<const double> coin, std::span<const double> util) const;
  MarketView market_view(AgentId self) const;
  TaxView tax_view() const;
  void fill_spatial(std::vector<std::int16_t>& out, int x0, int y0, int w, int h, AgentId self) const;

  EpisodeConfig config_;
  GridWorld world_;
  OrderBook book_;
  std::vector<AgentState> agents_;
  Rng rng_;
  Step t_ = 0;
  TaxSchedule schedule_;
  std::optional<Ballot> planner_ranking_;
  std::vector<Coins> wealth_at_period_start_;
  std::vector<Coins> previous_incomes_;
  std::vector<double> previous_marginal_rates_;
  std::vector<double> utilities_;
  double swf_ = 0.0;
  // Running trade statistics, so observations need not rescan the history.
  std::array<double, kNumMaterials> trade_price_sum_{};
  std::array<std::array<int, kNumPrices>, kNumMaterials> trade_counts_{};
};

}  // namespace aiecon
