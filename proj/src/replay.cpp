#include "aiecon/replay.hpp"

#include <istream>
#include <sstream>

#include "aiecon/episode.hpp"

namespace aiecon {

using nlohmann::json;

int ReplayReport::exit_code() const {
  switch (status) {
    case ReplayStatus::Verified: return 0;
    case ReplayStatus::ParseError:
    case ReplayStatus::ConfigError: return 2;
    case ReplayStatus::InvariantViolation: return 3;
    case ReplayStatus::Mismatch: return 4;
  }
  return 1;
}

ParsedLog parse_log(std::istream& in) {
  ParsedLog log;
  std::string text;
  int line = 0;
  bool have_header = false;
  bool have_summary = false;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    if (have_summary) throw LogParseError("record after the summary", line);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw LogParseError(std::string("invalid JSON: ") + e.what(), line);
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
      throw LogParseError("record without a type", line);
    }
    const std::string type = j["type"];
    if (!have_header) {
      if (type != "header") throw LogParseError("log must start with a header record", line);
      log.header = std::move(j);
      have_header = true;
      continue;
    }
    if (type == "step") {
      if (!j.contains("t") || !j["t"].is_number_integer() ||
          j["t"].get<Step>() != static_cast<Step>(log.steps.size())) {
        throw LogParseError("step records out of order", line);
      }
      log.steps.push_back(std::move(j));
    } else if (type == "period") {
      if (log.steps.empty() || !j.contains("t") || j["t"] != log.steps.back()["t"]) {
        throw LogParseError("period record does not follow its step", line);
      }
      log.periods.push_back(std::move(j));
    } else if (type == "summary") {
      log.summary = std::move(j);
      have_summary = true;
    } else {
      throw LogParseError("unknown record type '" + type + "'", line);
    }
  }
  if (!have_header) throw LogParseError("empty log", line);
  if (!have_summary) throw LogParseError("truncated log: no summary record", line);
  return log;
}

namespace {

struct Divergence {
  Step t;
  std::string what;
};

std::optional<Divergence> check_derived(const ParsedLog& log, const EpisodeConfig& config) {
  std::vector<double> prev_u = log.header.at("utility").get<std::vector<double>>();
  double prev_swf = log.header.at("swf").get<double>();
  for (const json& s : log.steps) {
    const Step t = s.at("t").get<Step>();
    const auto coin_i = s.at("coin").get<std::vector<Coins>>();
    const auto labor = s.at("labor").get<std::vector<double>>();
    const auto util = s.at("utility").get<std::vector<double>>();
    const auto rewards = s.at("rewards").get<std::vector<double>>();
    const auto langs = s.at("languages").get<std::vector<std::string>>();
    const std::size_t n = prev_u.size();
    if (coin_i.size() != n || labor.size() != n || util.size() != n || rewards.size() != n || langs.size() != n) {
      return Divergence{t, "per-agent columns have the wrong length"};
    }
    std::vector<double> coin(coin_i.begin(), coin_i.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (utility(coin[i], labor[i], config.eta) != util[i]) {
        return Divergence{t, "utility of agent " + std::to_string(i)};
      }
      if (agent_reward(util[i], prev_u[i]) != rewards[i]) return Divergence{t, "reward of agent " + std::to_string(i)};
    }
    const double swf = social_welfare(config.objective, coin, util);
    if (swf != s.at("swf").get<double>()) return Divergence{t, "social welfare"};
    if (planner_reward(swf, prev_swf) != s.at("planner_reward").get<double>()) return Divergence{t, "planner reward"};
    const auto m = metrics::snapshot(t, coin, util);
    const json& lm = s.at("metrics");
    if (m.eq != lm.at("eq").get<double>() || m.gini != lm.at("gini").get<double>() ||
        m.prod != lm.at("prod").get<double>() || m.maximin != lm.at("maximin").get<double>() ||
        m.swf_inverse_income != lm.at("swf_inverse_income").get<double>() ||
        m.swf_eq_times_prod != lm.at("swf_eq_times_prod").get<double>()) {
      return Divergence{t, "metrics"};
    }
    std::vector<LanguageMap> maps;
    for (const auto& l : langs) maps.push_back(LanguageMap::from_string(l));
    if (population_alignment(maps) != s.at("alignment").get<double>()) return Divergence{t, "alignment"};
    prev_u = util;
    prev_swf = swf;
  }
  return std::nullopt;
}

std::optional<PlannerAction> planner_action_of(const json& step) {
  if (!step.contains("planner_action")) return std::nullopt;
  const json& p = step["planner_action"];
  PlannerAction a;
  a.rate_levels = p.at("rate_levels").get<std::vector<int>>();
  if (p.contains("ranking") && !p["ranking"].is_null()) a.ranking = p["ranking"].get<int>();
  return a;
}

std::optional<Divergence> check_resimulation(const ParsedLog& log, const EpisodeConfig& config, std::uint64_t seed) {
  Environment env(config, seed);
  std::size_t period_index = 0;
  for (const json& s : log.steps) {
    const Step t = s.at("t").get<Step>();
    const auto joint = s.at("actions").get<std::vector<int>>();
    StepResult res;
    try {
      res = env.step(joint, planner_action_of(s));
    } catch (const std::invalid_argument& e) {
      return Divergence{t, std::string("logged actions rejected: ") + e.what()};
    }
    if (step_json(res.record) != s) return Divergence{t, "re-simulated step record differs"};
    if (res.record.period) {
      if (period_index >= log.periods.size() || period_json(*res.record.period, t) != log.periods[period_index]) {
        return Divergence{t, "re-simulated period record differs"};
      }
      ++period_index;
    }
  }
  if (period_index != log.periods.size()) return Divergence{env.t(), "extra period records in log"};
  if (static_cast<Step>(log.steps.size()) != config.horizon) return Divergence{env.t(), "log ends before the horizon"};
  const json& summary = log.summary;
  std::ostringstream hash;
  hash << std::hex << env.world().state_hash();
  if (summary.at("world_hash") != hash.str() || summary.at("world") != env.world().snapshot() ||
      summary.at("steps").get<Step>() != env.t()) {
    return Divergence{env.t() - 1, "final world state differs"};
  }
  return std::nullopt;
}

}  // namespace

ReplayReport replay(const ParsedLog& log) {
  ReplayReport report;
  EpisodeConfig config;
  std::uint64_t seed = 0;
  try {
    config = config_from_header(log.header);
    seed = log.header.at("seed").get<std::uint64_t>();
    if (log.header.at("digest").get<std::string>() != config_digest(config)) {
      report.status = ReplayStatus::Mismatch;
      report.message = "header digest does not match its config";
      return report;
    }
  } catch (const ConfigError& e) {
    report.status = ReplayStatus::ConfigError;
    report.message = std::string("header config: ") + e.what();
    return report;
  } catch (const json::exception& e) {
    report.status = ReplayStatus::ParseError;
    report.message = std::string("header: ") + e.what();
    return report;
  }

  std::optional<Divergence> derived;
  std::optional<Divergence> resim;
  try {
    derived = check_derived(log, config);
    resim = check_resimulation(log, config, seed);
  } catch (const InvariantViolation& e) {
    report.status = ReplayStatus::InvariantViolation;
    report.message = e.what();
    return report;
  } catch (const json::exception& e) {
    report.status = ReplayStatus::ParseError;
    report.message = e.what();
    return report;
  }
  report.steps_checked = log.steps.size();
  std::optional<Divergence> first = derived;
  if (resim && (!first || resim->t < first->t)) first = resim;
  if (first) {
    report.status = ReplayStatus::Mismatch;
    report.first_divergent_step = first->t;
    report.message = "step " + std::to_string(first->t) + ": " + first->what;
  } else {
    report.message = "verified " + std::to_string(log.steps.size()) + " steps";
  }
  return report;
}

ReplayReport replay(std::istream& in) {
  try {
    return replay(parse_log(in));
  } catch (const LogParseError& e) {
    ReplayReport r;
    r.status = ReplayStatus::ParseError;
    r.message = e.what();
    return r;
  }
}

}  // namespace aiecon
