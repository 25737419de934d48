#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "aiecon/episode.hpp"
#include "aiecon/replay.hpp"

using namespace aiecon;

namespace {

EpisodeConfig short_config() {
  EpisodeConfig c;
  c.horizon = 300;
  c.tax_period = 100;
  return c;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + "\n";
  return s;
}

// Always answers an action the mask forbids.
class StubbornPolicy final : public AgentPolicy {
 public:
  int act(const AgentObservation&, Rng&) override { return actions::trade(Material::Soil, Side::Ask, 9); }
};

}  // namespace

TEST(Episode, SameSeedSameBytes) {
  const auto a = to_jsonl(run_episode(short_config(), 11));
  const auto b = to_jsonl(run_episode(short_config(), 11));
  EXPECT_EQ(a, b);
  EXPECT_NE(a, to_jsonl(run_episode(short_config(), 12)));
}

TEST(Episode, LogLayout) {
  const auto lines = lines_of(to_jsonl(run_episode(short_config(), 1)));
  ASSERT_EQ(lines.size(), 1u + 300u + 3u + 1u);
  EXPECT_NE(lines.front().find("\"type\":\"header\""), std::string::npos);
  EXPECT_NE(lines.back().find("\"type\":\"summary\""), std::string::npos);
}

TEST(Episode, ReplayVerifiesFreshLog) {
  std::istringstream in(to_jsonl(run_episode(short_config(), 4)));
  const auto rep = replay(in);
  EXPECT_EQ(rep.status, ReplayStatus::Verified) << rep.message;
  EXPECT_EQ(rep.exit_code(), 0);
  EXPECT_EQ(rep.steps_checked, 300u);
}

TEST(Episode, CorruptedRewardIsMismatchAtThatStep) {
  auto lines = lines_of(to_jsonl(run_episode(short_config(), 4)));
  // lines[1] is t = 0; t = 57 sits after one period record.
  const std::size_t idx = 1 + 57 + 0;
  auto j = nlohmann::json::parse(lines[idx]);
  ASSERT_EQ(j["t"], 57);
  j["rewards"][2] = j["rewards"][2].get<double>() + 1e-6;
  lines[idx] = j.dump();
  std::istringstream in(join(lines));
  const auto rep = replay(in);
  EXPECT_EQ(rep.status, ReplayStatus::Mismatch);
  EXPECT_EQ(rep.exit_code(), 4);
  ASSERT_TRUE(rep.first_divergent_step);
  EXPECT_EQ(*rep.first_divergent_step, 57);
}

TEST(Episode, CorruptedActionIsMismatch) {
  auto lines = lines_of(to_jsonl(run_episode(short_config(), 4)));
  const std::size_t idx = 1 + 130 + 1;  // one period record precedes t = 130
  auto j = nlohmann::json::parse(lines[idx]);
  ASSERT_EQ(j["t"], 130);
  j["actions"][0] = j["actions"][0] == 0 ? 1 : 0;
  lines[idx] = j.dump();
  std::istringstream in(join(lines));
  const auto rep = replay(in);
  EXPECT_EQ(rep.status, ReplayStatus::Mismatch);
  ASSERT_TRUE(rep.first_divergent_step);
  EXPECT_EQ(*rep.first_divergent_step, 130);
}

TEST(Episode, TruncatedLogIsParseError) {
  auto lines = lines_of(to_jsonl(run_episode(short_config(), 4)));
  lines.resize(lines.size() / 2);
  std::istringstream in(join(lines));
  const auto rep = replay(in);
  EXPECT_EQ(rep.status, ReplayStatus::ParseError);
  EXPECT_EQ(rep.exit_code(), 2);
  std::istringstream again(join(lines));
  EXPECT_THROW(parse_log(again), LogParseError);
}

TEST(Episode, MaskedAnswersBecomeNoops) {
  const EpisodeConfig c = short_config();
  std::vector<std::unique_ptr<AgentPolicy>> agents;
  for (int i = 0; i < 6; ++i) agents.push_back(std::make_unique<StubbornPolicy>());
  FlatRatePlanner planner(0, RankingRule{});
  const auto log = run_episode(c, agents, planner, 3);
  EXPECT_EQ(log.summary.masked_replacements, 6L * 300L);
  for (const auto& s : log.steps) {
    for (int a : s.actions) EXPECT_EQ(a, actions::kNoop);
  }
}

TEST(Episode, TeachingPresetAlignsPopulation) {
  EpisodeConfig c;
  c.variant = Variant::Teaching;
  c.policy.agent = "scripted_teach";
  c.horizon = 100;
  const auto log = run_episode(c, 9);
  EXPECT_EQ(log.summary.alignment, 4.0);
}

TEST(Episode, CsvExportsHaveRows) {
  const auto log = run_episode(short_config(), 2);
  std::ostringstream m, r, p;
  write_metrics_csv(m, log);
  write_rewards_csv(r, log);
  write_periods_csv(p, log);
  EXPECT_EQ(lines_of(m.str()).size(), 301u);
  EXPECT_EQ(lines_of(r.str()).size(), 1u + 300u * 6u);
  EXPECT_EQ(lines_of(p.str()).size(), 4u);
  const auto traces = reward_traces(log);
  ASSERT_EQ(traces.size(), 6u);
  EXPECT_EQ(traces[0].size(), 300u);
}

TEST(Cli, MissingConfigExitsTwoWithoutOutput) {
  const auto out = std::filesystem::temp_directory_path() / "aiecon_cli_missing";
  std::filesystem::remove_all(out);
  const std::string cmd = std::string(AIECON_CLI) + " run --config /nonexistent.toml --seed 1 --out " +
                          out.string() + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_FALSE(std::filesystem::exists(out));
}

TEST(Cli, RunThenReplay) {
  const auto out = std::filesystem::temp_directory_path() / "aiecon_cli_run";
  std::filesystem::remove_all(out);
  const std::string run = std::string(AIECON_CLI) + " run --config " + AIECON_PRESETS +
                          "/communication.toml --seed 5 --out " + out.string() + " > /dev/null 2>&1";
  ASSERT_EQ(std::system(run.c_str()), 0);
  const std::string rep = std::string(AIECON_CLI) + " replay " + (out / "episode.jsonl").string() + " > /dev/null 2>&1";
  EXPECT_EQ(std::system(rep.c_str()), 0);
  std::filesystem::remove_all(out);
}
