#include <gtest/gtest.h>

#include <cmath>

#include "aiecon/engine.hpp"
#include "aiecon/policy.hpp"

using namespace aiecon;

namespace {

EpisodeConfig small_config(Variant v = Variant::Communication) {
  EpisodeConfig c;
  c.variant = v;
  c.horizon = 200;
  c.tax_period = 50;
  return c;
}

PlannerAction flat(int level, const EpisodeConfig& c) {
  return PlannerAction{std::vector<int>(c.tax_cutoffs.size(), level), 0};
}

std::vector<int> random_actions(const Environment& env, Rng& rng) {
  std::vector<int> out;
  for (int i = 0; i < env.num_agents(); ++i) {
    const auto mask = env.action_mask(i);
    std::vector<int> ok;
    for (int a = 0; a < actions::kCount; ++a) {
      if (mask[static_cast<std::size_t>(a)]) ok.push_back(a);
    }
    out.push_back(ok[rng.below(ok.size())]);
  }
  return out;
}

std::optional<PlannerAction> planner_for(const Environment& env, Rng& rng) {
  if (!env.needs_planner_action()) return std::nullopt;
  return flat(static_cast<int>(rng.below(static_cast<std::uint64_t>(env.config().rate_levels))), env.config());
}

}  // namespace

TEST(Utility, Examples) {
  EXPECT_DOUBLE_EQ(utility(1.0, 3.0, 0.5), -3.0);
  EXPECT_DOUBLE_EQ(utility(4.0, 0.0, 0.5), 2.0);
  EXPECT_DOUBLE_EQ(utility(0.0, 0.0, 0.5), -2.0);
  EXPECT_THROW(utility(4.0, 0.0, 1.0), ConfigError);
  EXPECT_THROW(utility(4.0, 0.0, 0.0), ConfigError);
  EXPECT_TRUE(std::isfinite(utility(0.0, 0.0, 2.0)));
  for (int c = 0; c < 100; ++c) EXPECT_LT(utility(c, 1.0, 0.5), utility(c + 1, 1.0, 0.5));
}

TEST(Actions, EncodeDecodeRoundTrip) {
  for (int a = 0; a < actions::kCount; ++a) {
    const auto d = actions::decode(a);
    int back = -1;
    switch (d.kind) {
      case actions::Kind::Noop: back = actions::kNoop; break;
      case actions::Kind::Move: back = actions::move(d.direction); break;
      case actions::Kind::Trade: back = actions::trade(d.material, d.side, d.price); break;
      case actions::Kind::BuildAlone: back = actions::build_alone(d.house); break;
      case actions::Kind::BuildTogether: back = actions::build_together(d.house); break;
      case actions::Kind::Vote: back = actions::vote(d.ballot); break;
    }
    EXPECT_EQ(back, a);
  }
  EXPECT_EQ(actions::describe(actions::trade(Material::Wood, Side::Bid, 3)), "bid-wood@3");
}

TEST(Engine, InitialStateFromSeed) {
  const Environment env(small_config(), 5);
  for (const auto& a : env.agents()) {
    EXPECT_GE(a.build_skill_alone, 10);
    EXPECT_LE(a.build_skill_alone, 30);
    EXPECT_GT(a.build_skill_together, a.build_skill_alone);
    EXPECT_EQ(a.holdings.coin, 0);
  }
  EXPECT_EQ(population_alignment(env.languages()), 8.0 / 15.0);
  EXPECT_TRUE(env.needs_planner_action());
}

TEST(Engine, MasksFollowRoles) {
  const Environment teach(small_config(Variant::Teaching), 1);
  for (int i = 0; i < 6; ++i) {
    const auto m = teach.action_mask(i);
    ASSERT_EQ(m.size(), static_cast<std::size_t>(actions::kCount));
    EXPECT_TRUE(m[actions::kNoop]);
    const bool teacher = i < 3;
    EXPECT_EQ(m[static_cast<std::size_t>(actions::build_together(HouseType::Blue))], teacher);
    EXPECT_FALSE(m[static_cast<std::size_t>(actions::build_alone(HouseType::Red))]);  // no materials yet
    // Zero coin: only the zero-price bid is affordable; no units: no asks.
    EXPECT_TRUE(m[static_cast<std::size_t>(actions::trade(Material::Iron, Side::Bid, 0))]);
    EXPECT_FALSE(m[static_cast<std::size_t>(actions::trade(Material::Iron, Side::Bid, 1))]);
    EXPECT_FALSE(m[static_cast<std::size_t>(actions::trade(Material::Iron, Side::Ask, 5))]);
  }
}

TEST(Engine, AllNoopStepChangesNothing) {
  Environment env(small_config(), 3);
  const auto c = env.config();
  const std::vector<int> noop(6, actions::kNoop);
  auto r = env.step(noop, flat(0, c));
  for (double x : r.record.rewards) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(r.record.planner_reward, 0.0);
  EXPECT_EQ(r.record.alignment, 8.0 / 15.0);
  for (auto x : r.record.coin) EXPECT_EQ(x, 0);
  EXPECT_EQ(r.observations.size(), 6u);
  EXPECT_FALSE(r.planner_observation);
}

TEST(Engine, MalformedStepsRejected) {
  Environment env(small_config(), 3);
  const auto c = env.config();
  const std::vector<int> noop(6, actions::kNoop);
  EXPECT_THROW(env.step(std::vector<int>(5, 0), flat(0, c)), std::invalid_argument);
  EXPECT_THROW(env.step(noop), std::invalid_argument);  // period start needs the planner
  EXPECT_THROW(env.step(std::vector<int>{0, 0, 0, 0, 0, 121}, flat(0, c)), std::invalid_argument);
  PlannerAction bad = flat(0, c);
  bad.rate_levels.pop_back();
  EXPECT_THROW(env.step(noop, bad), std::invalid_argument);
  bad = flat(c.rate_levels, c);
  EXPECT_THROW(env.step(noop, bad), std::invalid_argument);
  std::vector<int> masked = noop;
  masked[0] = actions::trade(Material::Wood, Side::Ask, 3);  // holds no wood
  EXPECT_THROW(env.step(masked, flat(0, c)), std::invalid_argument);
  EXPECT_EQ(env.t(), 0);
  env.step(noop, flat(0, c));
  EXPECT_THROW(env.step(noop, flat(0, c)), std::invalid_argument);  // not a period start
}

TEST(Engine, RewardsTelescopeAndLaborAccumulates) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Environment env(small_config(), seed);
    Rng rng(seed + 100);
    const std::vector<double> u0(env.utilities().begin(), env.utilities().end());
    const double swf0 = env.swf();
    std::vector<double> sum(6, 0.0), labor(6, 0.0);
    double planner_sum = 0.0;
    while (!env.done()) {
      const auto planner = planner_for(env, rng);
      const auto r = env.step(random_actions(env, rng), planner);
      for (std::size_t i = 0; i < 6; ++i) {
        sum[i] += r.record.rewards[i];
        EXPECT_GE(r.record.labor[i], labor[i]);
        labor[i] = r.record.labor[i];
        EXPECT_EQ(r.record.utility[i], utility(static_cast<double>(r.record.coin[i]), labor[i], 0.5));
      }
      planner_sum += r.record.planner_reward;
    }
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(sum[i], env.utilities()[i] - u0[i], 1e-9);
    EXPECT_NEAR(planner_sum, env.swf() - swf0, 1e-9);
  }
}

TEST(Engine, CoinConservedAcrossPeriods) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Environment env(small_config(), seed);
    Rng rng(seed);
    Coins prev = -1;
    while (!env.done()) {
      const auto r = env.step(random_actions(env, rng), planner_for(env, rng));
      if (r.record.period) {
        Coins pre = 0;
        for (std::size_t i = 0; i < 6; ++i) pre += r.record.coin[i] - r.record.period->taxes.delta[i];
        Coins post = 0;
        for (auto c : r.record.coin) post += c;
        EXPECT_EQ(pre, post);
        prev = post;
      }
    }
    EXPECT_GE(prev, 0);
  }
}

TEST(Engine, BuildAloneEarnsSkill) {
  int built = 0;
  for (std::uint64_t seed = 0; seed < 20 && built < 5; ++seed) {
    EpisodeConfig c = small_config();
    c.horizon = 400;
    Environment env(c, seed);
    Rng rng(seed);
    while (!env.done()) {
      std::vector<Coins> before;
      for (const auto& a : env.agents()) before.push_back(a.holdings.wealth());
      const auto r = env.step(random_actions(env, rng), planner_for(env, rng));
      for (const auto& b : r.record.builds) {
        if (!b.built) continue;
        ++built;
        EXPECT_EQ(b.income, env.agents()[static_cast<std::size_t>(b.agent)].build_skill_alone);
      }
    }
  }
  EXPECT_GT(built, 0);
}

TEST(Engine, TeachingCorrectionPaysSmallReward) {
  Environment env(small_config(Variant::Teaching), 2);
  const auto c = env.config();
  std::vector<int> acts(6, actions::kNoop);
  acts[0] = actions::build_together(HouseType::Blue);
  const AgentId partner = env.choose_partner(0);
  ASSERT_GE(partner, 3);
  const auto r = env.step(acts, flat(0, c));
  ASSERT_EQ(r.record.joint_builds.size(), 1u);
  const auto& j = r.record.joint_builds[0];
  EXPECT_EQ(j.partner, partner);
  EXPECT_EQ(j.outcome.kind, JointBuildOutcome::Kind::Corrected);
  EXPECT_EQ(r.record.coin[0], c.small_reward);
  EXPECT_EQ(r.record.coin[static_cast<std::size_t>(partner)], c.small_reward);
  EXPECT_GT(r.record.alignment, 0.8);
}

TEST(Engine, ObservationsHaveDeclaredShapes) {
  Environment env(small_config(), 4);
  const auto o = env.observe_agent(2);
  EXPECT_EQ(o.spatial.size(), static_cast<std::size_t>(channel::kCount * kWindow * kWindow));
  EXPECT_EQ(o.mask, env.action_mask(2));
  EXPECT_EQ(o.spatial[static_cast<std::size_t>(channel::kSelf * kWindow * kWindow + 5 * kWindow + 5)], 1);
  const auto p = env.observe_planner();
  EXPECT_EQ(p.spatial.size(), static_cast<std::size_t>(channel::kCount * p.width * p.height));
  EXPECT_EQ(p.brackets, 7);
  EXPECT_EQ(p.votes, std::vector<int>(6, -1));
}
