#include "aiecon/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace aiecon {

std::string_view to_string(PlannerObjective o) {
  return o == PlannerObjective::InverseIncome ? "inverse_income" : "eq_times_prod";
}

std::optional<PlannerObjective> parse_objective(std::string_view s) {
  if (s == "inverse_income") return PlannerObjective::InverseIncome;
  if (s == "eq_times_prod" || s == "eq_prod") return PlannerObjective::EqTimesProd;
  return std::nullopt;
}

std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "communication") return Variant::Communication;
  if (s == "teaching") return Variant::Teaching;
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void EpisodeConfig::validate() const {
  world.validate();
  if (world.num_agents != kLanguageAgents) throw ConfigError("the economy runs with exactly 6 agents");
  if (tax_period < 1) throw ConfigError("tax_period must be at least 1");
  if (horizon < tax_period) throw ConfigError("horizon must cover at least one tax period");
  if (horizon % tax_period != 0) throw ConfigError("horizon must be a multiple of tax_period");
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  if (eta == 1.0) throw ConfigError("eta = 1 (log utility) is not supported");
  for (double l : {labor.move, labor.gather, labor.trade, labor.build_alone, labor.build_together, labor.vote}) {
    if (!(l >= 0.0)) throw ConfigError("labor costs must be non-negative");
  }
  if (small_reward < 0) throw ConfigError("small_reward must be non-negative");
  if (!(skill.pareto_shape > 0.0)) throw ConfigError("skill.pareto_shape must be positive");
  if (!(skill.min > 0.0 && skill.max >= skill.min)) throw ConfigError("skill range must satisfy 0 < min <= max");
  if (!(skill.together_multiplier > 1.0)) throw ConfigError("skill.together_multiplier must exceed 1");
  if (!(skill.together_max > skill.max)) throw ConfigError("skill.together_max must exceed skill.max");
  if (!(gather_skill >= 0.0 && gather_skill <= 1.0)) throw ConfigError("gather_skill must lie in [0,1]");
  if (initial_coin < 0) throw ConfigError("initial_coin must be non-negative");
  if (market.order_cap < 1) throw ConfigError("market.order_cap must be at least 1");
  if (market.expiry < 1) throw ConfigError("market.expiry must be at least 1");
  if (rate_levels < 2) throw ConfigError("tax.rate_levels must be at least 2");
  TaxSchedule probe;
  probe.cutoffs = tax_cutoffs;
  probe.rates.assign(tax_cutoffs.size(), 0.0);
  probe.validate();
  if (!(invest.kappa >= 0.0)) throw ConfigError("invest.kappa must be non-negative");
  if (!(invest.regen_max >= 0.0 && invest.regen_max <= 1.0)) throw ConfigError("invest.regen_max must lie in [0,1]");
  if (policy.planner_rate_level < 0 || policy.planner_rate_level >= rate_levels) {
    throw ConfigError("policy.planner_rate_level outside the rate grid");
  }
  for (int l : policy.planner_schedule) {
    if (l < 0 || l >= rate_levels) throw ConfigError("policy.planner_schedule level outside the rate grid");
  }
  if (policy.planner == "schedule" &&
      (policy.planner_schedule.empty() || policy.planner_schedule.size() % tax_cutoffs.size() != 0)) {
    throw ConfigError("policy.planner_schedule must hold whole bracket vectors");
  }
  if (policy.planner_fixed_ranking < 0 || policy.planner_fixed_ranking >= kNumBallots) {
    throw ConfigError("policy.planner_fixed_ranking must lie in 0..23");
  }
  if (policy.agent != "random" && policy.agent != "noop" && policy.agent != "scripted_teach" &&
      policy.agent != "softmax") {
    throw ConfigError("unknown agent policy '" + policy.agent + "'");
  }
  if (policy.planner != "flat" && policy.planner != "schedule") {
    throw ConfigError("unknown planner policy '" + policy.planner + "'");
  }
  if (!(policy.softmax_temperature > 0.0)) throw ConfigError("policy.softmax_temperature must be positive");
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

double to_double(const std::string& s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ConfigError("expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ConfigError("expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

std::vector<std::string> to_list(const std::string& s) {
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ConfigError("expected a [list], got '" + s + "'");
  std::vector<std::string> out;
  const std::string inner = trim(std::string_view(s).substr(1, s.size() - 2));
  if (inner.empty()) return out;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(unquote(trim(item)));
  return out;
}

std::array<double, kNumMaterials> to_material_array(const std::string& s) {
  const auto items = to_list(s);
  if (items.size() != kNumMaterials) throw ConfigError("expected four values (wood, stone, iron, soil)");
  std::array<double, kNumMaterials> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_double(items[i]);
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) out += format_double(v[i]);
    else out += std::to_string(v[i]);
  }
  return out + "]";
}

using Setter = std::function<void(EpisodeConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["variant"] = [](EpisodeConfig& c, const std::string& v) {
      auto x = parse_variant(v);
      if (!x) throw ConfigError("unknown variant '" + v + "'");
      c.variant = *x;
    };
    t["system"] = [](EpisodeConfig& c, const std::string& v) {
      auto x = parse_governing_system(v);
      if (!x) throw ConfigError("unknown governing system '" + v + "'");
      c.system = *x;
    };
    t["objective"] = [](EpisodeConfig& c, const std::string& v) {
      auto x = parse_objective(v);
      if (!x) throw ConfigError("unknown planner objective '" + v + "'");
      c.objective = *x;
    };
    t["horizon"] = [](EpisodeConfig& c, const std::string& v) { c.horizon = static_cast<int>(to_int(v)); };
    t["tax_period"] = [](EpisodeConfig& c, const std::string& v) { c.tax_period = static_cast<int>(to_int(v)); };
    t["eta"] = [](EpisodeConfig& c, const std::string& v) { c.eta = to_double(v); };
    t["labor.move"] = [](EpisodeConfig& c, const std::string& v) { c.labor.move = to_double(v); };
    t["labor.gather"] = [](EpisodeConfig& c, const std::string& v) { c.labor.gather = to_double(v); };
    t["labor.trade"] = [](EpisodeConfig& c, const std::string& v) { c.labor.trade = to_double(v); };
    t["labor.build_alone"] = [](EpisodeConfig& c, const std::string& v) { c.labor.build_alone = to_double(v); };
    t["labor.build_together"] = [](EpisodeConfig& c, const std::string& v) { c.labor.build_together = to_double(v); };
    t["labor.vote"] = [](EpisodeConfig& c, const std::string& v) { c.labor.vote = to_double(v); };
    t["small_reward"] = [](EpisodeConfig& c, const std::string& v) { c.small_reward = to_int(v); };
    t["joint_payout"] = [](EpisodeConfig& c, const std::string& v) {
      if (v == "each") c.joint_payout = JointPayout::EachOwnSkill;
      else if (v == "split") c.joint_payout = JointPayout::Split;
      else throw ConfigError("joint_payout must be 'each' or 'split'");
    };
    t["partner_rule"] = [](EpisodeConfig& c, const std::string& v) {
      if (v == "least_aligned") c.partner_rule = PartnerRule::LeastAligned;
      else if (v == "nearest") c.partner_rule = PartnerRule::Nearest;
      else throw ConfigError("partner_rule must be 'least_aligned' or 'nearest'");
    };
    t["skill.pareto_shape"] = [](EpisodeConfig& c, const std::string& v) { c.skill.pareto_shape = to_double(v); };
    t["skill.min"] = [](EpisodeConfig& c, const std::string& v) { c.skill.min = to_double(v); };
    t["skill.max"] = [](EpisodeConfig& c, const std::string& v) { c.skill.max = to_double(v); };
    t["skill.together_multiplier"] = [](EpisodeConfig& c, const std::string& v) {
      c.skill.together_multiplier = to_double(v);
    };
    t["skill.together_max"] = [](EpisodeConfig& c, const std::string& v) { c.skill.together_max = to_double(v); };
    t["gather_skill"] = [](EpisodeConfig& c, const std::string& v) { c.gather_skill = to_double(v); };
    t["initial_coin"] = [](EpisodeConfig& c, const std::string& v) { c.initial_coin = to_int(v); };
    t["agents"] = [](EpisodeConfig& c, const std::string& v) { c.world.num_agents = static_cast<int>(to_int(v)); };
    t["world.width"] = [](EpisodeConfig& c, const std::string& v) { c.world.width = static_cast<int>(to_int(v)); };
    t["world.height"] = [](EpisodeConfig& c, const std::string& v) { c.world.height = static_cast<int>(to_int(v)); };
    t["world.density"] = [](EpisodeConfig& c, const std::string& v) { c.world.density = to_material_array(v); };
    t["world.initial_regen"] = [](EpisodeConfig& c, const std::string& v) {
      c.world.initial_regen = to_material_array(v);
    };
    t["world.initial_units"] = [](EpisodeConfig& c, const std::string& v) {
      c.world.initial_units = static_cast<int>(to_int(v));
    };
    t["world.obstacle_density"] = [](EpisodeConfig& c, const std::string& v) {
      c.world.obstacle_density = to_double(v);
    };
    t["market.order_cap"] = [](EpisodeConfig& c, const std::string& v) {
      c.market.order_cap = static_cast<int>(to_int(v));
    };
    t["market.cap_mode"] = [](EpisodeConfig& c, const std::string& v) {
      if (v == "per_side") c.market.cap_mode = OrderCapMode::PerSide;
      else if (v == "per_resource") c.market.cap_mode = OrderCapMode::PerResource;
      else throw ConfigError("market.cap_mode must be 'per_side' or 'per_resource'");
    };
    t["market.expiry"] = [](EpisodeConfig& c, const std::string& v) { c.market.expiry = to_int(v); };
    t["tax.cutoffs"] = [](EpisodeConfig& c, const std::string& v) {
      c.tax_cutoffs.clear();
      for (const auto& x : to_list(v)) c.tax_cutoffs.push_back(to_double(x));
    };
    t["tax.rate_levels"] = [](EpisodeConfig& c, const std::string& v) { c.rate_levels = static_cast<int>(to_int(v)); };
    t["tax.revenue_mode"] = [](EpisodeConfig& c, const std::string& v) {
      if (v == "redistribute") c.revenue_mode = RevenueMode::Redistribute;
      else if (v == "sink") c.revenue_mode = RevenueMode::Sink;
      else throw ConfigError("tax.revenue_mode must be 'redistribute' or 'sink'");
    };
    t["invest.kappa"] = [](EpisodeConfig& c, const std::string& v) { c.invest.kappa = to_double(v); };
    t["invest.regen_max"] = [](EpisodeConfig& c, const std::string& v) { c.invest.regen_max = to_double(v); };
    t["policy.agent"] = [](EpisodeConfig& c, const std::string& v) { c.policy.agent = v; };
    t["policy.planner"] = [](EpisodeConfig& c, const std::string& v) { c.policy.planner = v; };
    t["policy.planner_rate_level"] = [](EpisodeConfig& c, const std::string& v) {
      c.policy.planner_rate_level = static_cast<int>(to_int(v));
    };
    t["policy.planner_schedule"] = [](EpisodeConfig& c, const std::string& v) {
      c.policy.planner_schedule.clear();
      for (const auto& x : to_list(v)) c.policy.planner_schedule.push_back(static_cast<int>(to_int(x)));
    };
    t["policy.planner_ranking"] = [](EpisodeConfig& c, const std::string& v) {
      if (v == "fixed") c.policy.planner_ranking = RankingMode::Fixed;
      else if (v == "round_robin") c.policy.planner_ranking = RankingMode::RoundRobin;
      else throw ConfigError("policy.planner_ranking must be 'fixed' or 'round_robin'");
    };
    t["policy.planner_fixed_ranking"] = [](EpisodeConfig& c, const std::string& v) {
      c.policy.planner_fixed_ranking = static_cast<int>(to_int(v));
    };
    t["policy.softmax_temperature"] = [](EpisodeConfig& c, const std::string& v) {
      c.policy.softmax_temperature = to_double(v);
    };
    t["policy.softmax_learning_rate"] = [](EpisodeConfig& c, const std::string& v) {
      c.policy.softmax_learning_rate = to_double(v);
    };
    t["seed"] = [](EpisodeConfig& c, const std::string& v) { c.seed = to_u64(v); };
    return t;
  }();
  return table;
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::string_view text) {
  std::vector<KeyValue> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    bool quoted = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (raw[i] == '#' && !quoted) {
        cut = i;
        break;
      }
    }
    const std::string body = trim(std::string_view(raw).substr(0, cut));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    KeyValue kv{trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)), line};
    if (kv.key.empty()) throw ConfigError("missing key before '='", line);
    if (kv.value.empty()) throw ConfigError("missing value for '" + kv.key + "'", line);
    if (kv.value.front() == '"') {
      if (kv.value.size() < 2 || kv.value.back() != '"') throw ConfigError("unterminated string", line);
      kv.value = kv.value.substr(1, kv.value.size() - 2);
    } else if (kv.value.front() == '[' && kv.value.back() != ']') {
      throw ConfigError("unterminated list", line);
    }
    out.push_back(std::move(kv));
  }
  return out;
}

std::vector<KeyValue> read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

void apply_setting(EpisodeConfig& config, const KeyValue& kv) {
  const auto& table = setters();
  const auto it = table.find(kv.key);
  if (it == table.end()) throw ConfigError("unknown key '" + kv.key + "'", kv.line);
  try {
    it->second(config, kv.value);
  } catch (const ConfigError& e) {
    throw ConfigError(kv.key + ": " + e.what(), kv.line);
  }
}

EpisodeConfig config_from_key_values(const std::vector<KeyValue>& kvs, EpisodeConfig base) {
  for (const auto& kv : kvs) apply_setting(base, kv);
  base.validate();
  return base;
}

EpisodeConfig load_config(const std::string& path) { return config_from_key_values(read_key_values(path)); }

std::vector<std::pair<std::string, std::string>> canonical_settings(const EpisodeConfig& c) {
  const auto arr = [](const std::array<double, kNumMaterials>& a) {
    return join(std::vector<double>(a.begin(), a.end()));
  };
  return {
      {"variant", std::string(to_string(c.variant))},
      {"system", std::string(to_string(c.system))},
      {"objective", std::string(to_string(c.objective))},
      {"horizon", std::to_string(c.horizon)},
      {"tax_period", std::to_string(c.tax_period)},
      {"eta", format_double(c.eta)},
      {"labor.move", format_double(c.labor.move)},
      {"labor.gather", format_double(c.labor.gather)},
      {"labor.trade", format_double(c.labor.trade)},
      {"labor.build_alone", format_double(c.labor.build_alone)},
      {"labor.build_together", format_double(c.labor.build_together)},
      {"labor.vote", format_double(c.labor.vote)},
      {"small_reward", std::to_string(c.small_reward)},
      {"joint_payout", c.joint_payout == JointPayout::EachOwnSkill ? "each" : "split"},
      {"partner_rule", c.partner_rule == PartnerRule::LeastAligned ? "least_aligned" : "nearest"},
      {"skill.pareto_shape", format_double(c.skill.pareto_shape)},
      {"skill.min", format_double(c.skill.min)},
      {"skill.max", format_double(c.skill.max)},
      {"skill.together_multiplier", format_double(c.skill.together_multiplier)},
      {"skill.together_max", format_double(c.skill.together_max)},
      {"gather_skill", format_double(c.gather_skill)},
      {"initial_coin", std::to_string(c.initial_coin)},
      {"agents", std::to_string(c.world.num_agents)},
      {"world.width", std::to_string(c.world.width)},
      {"world.height", std::to_string(c.world.height)},
      {"world.density", arr(c.world.density)},
      {"world.initial_regen", arr(c.world.initial_regen)},
      {"world.initial_units", std::to_string(c.world.initial_units)},
      {"world.obstacle_density", format_double(c.world.obstacle_density)},
      {"market.order_cap", std::to_string(c.market.order_cap)},
      {"market.cap_mode", c.market.cap_mode == OrderCapMode::PerSide ? "per_side" : "per_resource"},
      {"market.expiry", std::to_string(c.market.expiry)},
      {"tax.cutoffs", join(c.tax_cutoffs)},
      {"tax.rate_levels", std::to_string(c.rate_levels)},
      {"tax.revenue_mode", c.revenue_mode == RevenueMode::Redistribute ? "redistribute" : "sink"},
      {"invest.kappa", format_double(c.invest.kappa)},
      {"invest.regen_max", format_double(c.invest.regen_max)},
      {"policy.agent", c.policy.agent},
      {"policy.planner", c.policy.planner},
      {"policy.planner_rate_level", std::to_string(c.policy.planner_rate_level)},
      {"policy.planner_schedule", join(c.policy.planner_schedule)},
      {"policy.planner_ranking", c.policy.planner_ranking == RankingMode::Fixed ? "fixed" : "round_robin"},
      {"policy.planner_fixed_ranking", std::to_string(c.policy.planner_fixed_ranking)},
      {"policy.softmax_temperature", format_double(c.policy.softmax_temperature)},
      {"policy.softmax_learning_rate", format_double(c.policy.softmax_learning_rate)},
      {"seed", std::to_string(c.seed)},
  };
}

std::string config_digest(const EpisodeConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& [k, v] : canonical_settings(config)) {
    if (k == "seed") continue;  // runs are identified by (digest, seed)
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace aiecon
