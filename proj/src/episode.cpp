#include "aiecon/episode.hpp"

#include <ostream>
#include <sstream>

namespace aiecon {

using nlohmann::json;

std::uint64_t policy_seed(std::uint64_t seed, int i) {
  return split_seed(seed, static_cast<std::uint64_t>(16 + (i + 1)));
}

EpisodeLog run_episode(const EpisodeConfig& config, std::span<const std::unique_ptr<AgentPolicy>> agents,
                       PlannerPolicy& planner, std::uint64_t seed) {
  Environment env(config, seed);
  const int n = env.num_agents();
  if (static_cast<int>(agents.size()) != n) {
    throw std::invalid_argument("expected " + std::to_string(n) + " agent policies, got " +
                                std::to_string(agents.size()));
  }

  EpisodeLog log;
  EpisodeHeader& h = log.header;
  h.config = env.config();
  h.config.seed = seed;
  h.seed = seed;
  h.digest = config_digest(h.config);
  for (const AgentState& a : env.agents()) {
    h.build_skill_alone.push_back(a.build_skill_alone);
    h.build_skill_together.push_back(a.build_skill_together);
    h.roles.emplace_back(to_string(a.role));
    h.languages.push_back(a.language.str());
    h.coin.push_back(a.holdings.wealth());
  }
  h.utility.assign(env.utilities().begin(), env.utilities().end());
  h.swf = env.swf();

  std::vector<Rng> rngs;
  for (int i = 0; i < n; ++i) rngs.emplace_back(policy_seed(seed, i));
  Rng planner_rng(policy_seed(seed, -1));

  std::vector<AgentObservation> obs;
  for (int i = 0; i < n; ++i) obs.push_back(env.observe_agent(i));
  std::optional<PlannerObservation> pobs = env.observe_planner();

  log.summary.masked_by_agent.assign(static_cast<std::size_t>(n), 0);
  log.steps.reserve(static_cast<std::size_t>(config.horizon));
  std::vector<int> joint(static_cast<std::size_t>(n));
  while (!env.done()) {
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      int a = agents[k]->act(obs[k], rngs[k]);
      if (a < 0 || a >= actions::kCount || !obs[k].mask[static_cast<std::size_t>(a)]) {
        a = actions::kNoop;
        ++log.summary.masked_replacements;
        ++log.summary.masked_by_agent[k];
      }
      joint[k] = a;
    }
    std::optional<PlannerAction> pa;
    if (env.needs_planner_action()) pa = planner.act(*pobs, planner_rng);

    StepResult res = env.step(joint, pa);
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      agents[k]->feedback(joint[k], res.record.rewards[k]);
    }
    log.steps.push_back(std::move(res.record));
    obs = std::move(res.observations);
    pobs = std::move(res.planner_observation);
  }

  EpisodeSummary& s = log.summary;
  s.steps = env.t();
  s.final = log.steps.empty() ? metrics::Snapshot{} : log.steps.back().metrics;
  s.alignment = log.steps.empty() ? 0.0 : log.steps.back().alignment;
  std::ostringstream hash;
  hash << std::hex << env.world().state_hash();
  s.world_hash = hash.str();
  s.world = env.world().snapshot();
  return log;
}

EpisodeLog run_episode(const EpisodeConfig& config, std::uint64_t seed) {
  std::vector<std::unique_ptr<AgentPolicy>> agents;
  for (int i = 0; i < config.num_agents(); ++i) agents.push_back(make_agent_policy(config, i));
  auto planner = make_planner_policy(config);
  return run_episode(config, agents, *planner, seed);
}

namespace {

json materials_json(const std::array<double, kNumMaterials>& v) { return json(std::vector<double>(v.begin(), v.end())); }

json metrics_json(const metrics::Snapshot& m) {
  return json{{"eq", m.eq},
              {"gini", m.gini},
              {"prod", m.prod},
              {"maximin", m.maximin},
              {"swf_inverse_income", m.swf_inverse_income},
              {"swf_eq_times_prod", m.swf_eq_times_prod}};
}

json ballot_json(const Ballot& b) {
  json out = json::array();
  for (Material m : b) out.push_back(std::string(to_string(m)));
  return out;
}

}  // namespace

json header_json(const EpisodeHeader& h) {
  json cfg = json::array();
  for (const auto& [k, v] : canonical_settings(h.config)) cfg.push_back(json::array({k, v}));
  return json{{"type", "header"},
              {"format", "aiecon-episode/1"},
              {"seed", h.seed},
              {"digest", h.digest},
              {"config", cfg},
              {"build_skill_alone", h.build_skill_alone},
              {"build_skill_together", h.build_skill_together},
              {"roles", h.roles},
              {"languages", h.languages},
              {"utility", h.utility},
              {"swf", h.swf},
              {"coin", h.coin}};
}

json step_json(const StepRecord& r) {
  json j{{"type", "step"},
         {"t", r.t},
         {"actions", r.actions},
         {"rewards", r.rewards},
         {"planner_reward", r.planner_reward},
         {"languages", r.languages},
         {"alignment", r.alignment},
         {"coin", r.coin},
         {"labor", r.labor},
         {"inventories", r.inventories},
         {"utility", r.utility},
         {"swf", r.swf},
         {"metrics", metrics_json(r.metrics)}};
  if (r.planner_action) {
    j["planner_action"] = json{{"rate_levels", r.planner_action->rate_levels},
                               {"ranking", r.planner_action->ranking ? json(*r.planner_action->ranking) : json()}};
  }
  json trades = json::array();
  for (const Trade& t : r.trades) {
    trades.push_back(json{{"material", std::string(to_string(t.material))},
                          {"price", t.price},
                          {"buyer", t.buyer},
                          {"seller", t.seller},
                          {"bid_id", t.bid_id},
                          {"ask_id", t.ask_id}});
  }
  j["trades"] = trades;
  json builds = json::array();
  for (const BuildEvent& b : r.builds) {
    builds.push_back(json{{"agent", b.agent},
                          {"house", std::string(to_string(b.house))},
                          {"built", b.built},
                          {"income", b.income}});
  }
  j["builds"] = builds;
  json joint = json::array();
  for (const JointBuildEvent& e : r.joint_builds) {
    joint.push_back(json{{"initiator", e.initiator},
                         {"partner", e.partner},
                         {"house", std::string(to_string(e.house))},
                         {"outcome", std::string(to_string(e.outcome.kind))},
                         {"position", e.outcome.position}});
  }
  j["joint"] = joint;
  return j;
}

json period_json(const PeriodRecord& p, Step t) {
  std::vector<double> after(p.investment.rates.begin(), p.investment.rates.end());
  std::vector<double> deltas(kNumMaterials);
  for (std::size_t m = 0; m < kNumMaterials; ++m) deltas[m] = p.investment.rates[m] - p.regen_before[m];
  return json{{"type", "period"},
              {"t", t},
              {"period", p.period},
              {"rates", p.rates},
              {"income", p.taxes.income},
              {"tax", p.taxes.tax},
              {"paid", p.taxes.paid},
              {"delta", p.taxes.delta},
              {"revenue", p.taxes.revenue},
              {"votes", p.votes},
              {"borda", json{{"ranking", ballot_json(p.borda.ranking)}, {"scores", p.borda.scores}}},
              {"invested", materials_json(p.investment.invested)},
              {"regen_before", materials_json(p.regen_before)},
              {"regen_after", after},
              {"regen_deltas", deltas}};
}

json summary_json(const EpisodeSummary& s) {
  return json{{"type", "summary"},
              {"steps", s.steps},
              {"masked_replacements", s.masked_replacements},
              {"masked_by_agent", s.masked_by_agent},
              {"final", metrics_json(s.final)},
              {"alignment", s.alignment},
              {"world_hash", s.world_hash},
              {"world", s.world}};
}

void write_jsonl(std::ostream& out, const EpisodeLog& log) {
  out << header_json(log.header).dump() << '\n';
  for (const StepRecord& r : log.steps) {
    out << step_json(r).dump() << '\n';
    if (r.period) out << period_json(*r.period, r.t).dump() << '\n';
  }
  out << summary_json(log.summary).dump() << '\n';
}

std::string to_jsonl(const EpisodeLog& log) {
  std::ostringstream out;
  write_jsonl(out, log);
  return out.str();
}

EpisodeConfig config_from_header(const json& header) {
  const json& cfg = header.at("config");
  if (!cfg.is_array()) throw ConfigError("header config must be a list of [key, value] pairs");
  std::vector<KeyValue> kvs;
  for (const json& kv : cfg) {
    if (!kv.is_array() || kv.size() != 2) throw ConfigError("malformed header config entry");
    kvs.push_back(KeyValue{kv[0].get<std::string>(), kv[1].get<std::string>(), 1});
  }
  return config_from_key_values(kvs);
}

void write_metrics_csv(std::ostream& out, const EpisodeLog& log) {
  out << "t,eq,gini,prod,maximin,swf_inverse_income,swf_eq_times_prod,swf,planner_reward,alignment\n";
  for (const StepRecord& r : log.steps) {
    const auto& m = r.metrics;
    out << r.t << ',' << format_double(m.eq) << ',' << format_double(m.gini) << ',' << format_double(m.prod) << ','
        << format_double(m.maximin) << ',' << format_double(m.swf_inverse_income) << ','
        << format_double(m.swf_eq_times_prod) << ',' << format_double(r.swf) << ','
        << format_double(r.planner_reward) << ',' << format_double(r.alignment) << '\n';
  }
}

void write_alignment_csv(std::ostream& out, const EpisodeLog& log) {
  const std::size_t n = log.header.languages.size();
  out << "t,alignment";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out << ",pair_" << i << '_' << j;
  }
  for (std::size_t i = 0; i < n; ++i) out << ",language_" << i;
  out << '\n';
  for (const StepRecord& r : log.steps) {
    std::vector<LanguageMap> maps;
    for (const auto& s : r.languages) maps.push_back(LanguageMap::from_string(s));
    out << r.t << ',' << format_double(r.alignment);
    for (std::size_t i = 0; i < maps.size(); ++i) {
      for (std::size_t j = i + 1; j < maps.size(); ++j) out << ',' << pair_alignment(maps[i], maps[j]);
    }
    for (const auto& s : r.languages) out << ',' << s;
    out << '\n';
  }
}

void write_trades_csv(std::ostream& out, const EpisodeLog& log) {
  out << "t,material,price,buyer,seller,bid_id,ask_id\n";
  for (const StepRecord& r : log.steps) {
    for (const Trade& t : r.trades) {
      out << r.t << ',' << to_string(t.material) << ',' << t.price << ',' << t.buyer << ',' << t.seller << ','
          << t.bid_id << ',' << t.ask_id << '\n';
    }
  }
}

void write_periods_csv(std::ostream& out, const EpisodeLog& log) {
  out << "period,t,revenue,rates,borda_ranking";
  for (Material m : kMaterials) out << ",invested_" << to_string(m);
  for (Material m : kMaterials) out << ",regen_" << to_string(m);
  out << '\n';
  for (const StepRecord& r : log.steps) {
    if (!r.period) continue;
    const PeriodRecord& p = *r.period;
    out << p.period << ',' << r.t << ',' << p.taxes.revenue << ',';
    for (std::size_t j = 0; j < p.rates.size(); ++j) out << (j ? ";" : "") << format_double(p.rates[j]);
    out << ',';
    for (std::size_t k = 0; k < kNumMaterials; ++k) out << (k ? ";" : "") << to_string(p.borda.ranking[k]);
    for (double v : p.investment.invested) out << ',' << format_double(v);
    for (double v : p.investment.rates) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_taxes_csv(std::ostream& out, const EpisodeLog& log) {
  out << "period,agent,income,tax,paid,delta,vote\n";
  for (const StepRecord& r : log.steps) {
    if (!r.period) continue;
    const PeriodRecord& p = *r.period;
    for (std::size_t i = 0; i < p.taxes.income.size(); ++i) {
      out << p.period << ',' << i << ',' << p.taxes.income[i] << ',' << format_double(p.taxes.tax[i]) << ','
          << p.taxes.paid[i] << ',' << p.taxes.delta[i] << ',' << p.votes[i] << '\n';
    }
  }
}

void write_rewards_csv(std::ostream& out, const EpisodeLog& log) {
  out << "t,agent,reward\n";
  for (const StepRecord& r : log.steps) {
    for (std::size_t i = 0; i < r.rewards.size(); ++i) out << r.t << ',' << i << ',' << format_double(r.rewards[i]) << '\n';
  }
}

std::vector<std::vector<double>> reward_traces(const EpisodeLog& log) {
  std::vector<std::vector<double>> out(log.header.utility.size());
  for (auto& s : out) s.reserve(log.steps.size());
  for (const StepRecord& r : log.steps) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i].push_back(r.rewards[i]);
  }
  return out;
}

}  // namespace aiecon
