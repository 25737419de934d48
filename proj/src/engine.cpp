#include "aiecon/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace aiecon {

namespace actions {

Decoded decode(int action) {
  if (action < 0 || action >= kCount) throw std::out_of_range("action index outside 0..120");
  Decoded d;
  if (action == kNoop) return d;
  if (action < kTradeBase) {
    d.kind = Kind::Move;
    d.direction = static_cast<Direction>(action - kMoveBase);
  } else if (action < kBuildAloneBase) {
    const int k = action - kTradeBase;
    d.kind = Kind::Trade;
    d.material = static_cast<Material>(k / (2 * kNumPrices));
    d.side = static_cast<Side>((k / kNumPrices) % 2);
    d.price = k % kNumPrices;
  } else if (action < kBuildTogetherBase) {
    d.kind = Kind::BuildAlone;
    d.house = static_cast<HouseType>(action - kBuildAloneBase);
  } else if (action < kVoteBase) {
    d.kind = Kind::BuildTogether;
    d.house = static_cast<HouseType>(action - kBuildTogetherBase);
  } else {
    d.kind = Kind::Vote;
    d.ballot = action - kVoteBase;
  }
  return d;
}

int move(Direction d) { return kMoveBase + static_cast<int>(d); }
int trade(Material m, Side s, int price) {
  return kTradeBase + index_of(m) * 2 * kNumPrices + static_cast<int>(s) * kNumPrices + price;
}
int build_alone(HouseType h) { return kBuildAloneBase + static_cast<int>(h); }
int build_together(HouseType h) { return kBuildTogetherBase + static_cast<int>(h); }
int vote(int ballot) { return kVoteBase + ballot; }

std::string describe(int action) {
  const Decoded d = decode(action);
  static constexpr const char* kDirs[] = {"up", "down", "left", "right"};
  switch (d.kind) {
    case Kind::Noop: return "noop";
    case Kind::Move: return std::string("move-") + kDirs[static_cast<int>(d.direction)];
    case Kind::Trade:
      return std::string(d.side == Side::Bid ? "bid-" : "ask-") + std::string(to_string(d.material)) + "@" +
             std::to_string(d.price);
    case Kind::BuildAlone: return "build-alone-" + std::string(to_string(d.house));
    case Kind::BuildTogether: return "build-together-" + std::string(to_string(d.house));
    case Kind::Vote: return "vote-" + std::to_string(d.ballot);
  }
  return "?";
}

}  // namespace actions

double utility(double coin, double labor, double eta) {
  if (!(eta > 0.0) || eta == 1.0) throw ConfigError("utility needs eta > 0 and eta != 1");
  double c = coin;
  if (eta > 1.0 && c < metrics::kMinCoin) c = metrics::kMinCoin;
  return (std::pow(c, 1.0 - eta) - 1.0) / (1.0 - eta) - labor;
}

Coins sample_build_skill(const SkillConfig& skill, Rng& rng) {
  const double u = 1.0 - rng.uniform01();  // (0, 1]
  const double x = skill.min / std::pow(u, 1.0 / skill.pareto_shape);
  return static_cast<Coins>(std::llround(std::min(x, skill.max)));
}

namespace {

EpisodeConfig validated(EpisodeConfig c) {
  c.validate();
  return c;
}

}  // namespace

Environment::Environment(EpisodeConfig config, std::uint64_t seed)
    : config_(validated(std::move(config))),
      world_(GridWorld::init(config_.world, split_seed(seed, 1))),
      book_(config_.market),
      rng_(split_seed(seed, 3)) {
  const int n = config_.num_agents();
  const auto langs = init_languages(config_.variant, n);
  const auto roles = init_roles(config_.variant, n);
  Rng skill_rng(split_seed(seed, 2));
  agents_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    AgentState& a = agents_[static_cast<std::size_t>(i)];
    a.id = i;
    a.holdings.coin = config_.initial_coin;
    a.build_skill_alone = sample_build_skill(config_.skill, skill_rng);
    const auto together = static_cast<Coins>(std::llround(
        std::min(static_cast<double>(a.build_skill_alone) * config_.skill.together_multiplier,
                 config_.skill.together_max)));
    a.build_skill_together = std::max(together, a.build_skill_alone + 1);
    a.gather_skill = config_.gather_skill;
    a.language = langs[static_cast<std::size_t>(i)];
    a.role = roles[static_cast<std::size_t>(i)];
  }
  schedule_.cutoffs = config_.tax_cutoffs;
  schedule_.rates.assign(config_.tax_cutoffs.size(), 0.0);
  wealth_at_period_start_.resize(agents_.size());
  previous_incomes_.assign(agents_.size(), 0);
  previous_marginal_rates_.assign(agents_.size(), 0.0);
  utilities_.resize(agents_.size());
  for (std::size_t i = 0; i < agents_.size(); ++i) {
    wealth_at_period_start_[i] = agents_[i].holdings.wealth();
    utilities_[i] = utility(static_cast<double>(wealth_at_period_start_[i]), 0.0, config_.eta);
  }
  const auto c = coins();
  swf_ = compute_swf(c, utilities_);
}

std::vector<LanguageMap> Environment::languages() const {
  std::vector<LanguageMap> out;
  out.reserve(agents_.size());
  for (const auto& a : agents_) out.push_back(a.language);
  return out;
}

std::vector<double> Environment::coins() const {
  std::vector<double> out;
  out.reserve(agents_.size());
  for (const auto& a : agents_) out.push_back(static_cast<double>(a.holdings.wealth()));
  return out;
}

double social_welfare(PlannerObjective objective, std::span<const double> coin, std::span<const double> util) {
  return objective == PlannerObjective::InverseIncome ? metrics::swf_inverse_income(util, coin)
                                                       : metrics::swf_eq_prod(coin);
}

double Environment::compute_swf(std::span<const double> coin, std::span<const double> util) const {
  return social_welfare(config_.objective, coin, util);
}

std::vector<Holdings> Environment::holdings_view() const {
  std::vector<Holdings> h;
  h.reserve(agents_.size());
  for (const auto& a : agents_) h.push_back(a.holdings);
  return h;
}

void Environment::write_back(const std::vector<Holdings>& h) {
  for (std::size_t i = 0; i < agents_.size(); ++i) agents_[i].holdings = h[i];
}

std::vector<std::uint8_t> Environment::action_mask(AgentId a) const {
  const AgentState& s = agents_.at(static_cast<std::size_t>(a));
  std::vector<std::uint8_t> mask(actions::kCount, 0);
  mask[actions::kNoop] = 1;
  for (int d = 0; d < 4; ++d) mask[static_cast<std::size_t>(actions::kMoveBase + d)] = 1;

  for (Material m : kMaterials) {
    const int bids = book_.open_orders(a, m, Side::Bid);
    const int asks = book_.open_orders(a, m, Side::Ask);
    const bool per_resource = config_.market.cap_mode == OrderCapMode::PerResource;
    const bool bid_room = (per_resource ? bids + asks : bids) < config_.market.order_cap;
    const bool ask_room = (per_resource ? bids + asks : asks) < config_.market.order_cap;
    const bool has_unit = s.holdings.units[static_cast<std::size_t>(index_of(m))] >= 1;
    for (int p = kMinPrice; p <= kMaxPrice; ++p) {
      mask[static_cast<std::size_t>(actions::trade(m, Side::Bid, p))] = bid_room && s.holdings.coin >= p;
      mask[static_cast<std::size_t>(actions::trade(m, Side::Ask, p))] = ask_room && has_unit;
    }
  }

  const bool teaching = config_.variant == Variant::Teaching;
  for (HouseType h : {HouseType::Red, HouseType::Blue}) {
    const auto r = recipe(h);
    const bool has_recipe = s.holdings.units[static_cast<std::size_t>(index_of(r[0]))] >= 1 &&
                            s.holdings.units[static_cast<std::size_t>(index_of(r[1]))] >= 1;
    const bool may_build_alone = !(teaching && s.role == Role::Teacher);
    mask[static_cast<std::size_t>(actions::build_alone(h))] = may_build_alone && has_recipe;
    const bool may_initiate = teaching ? s.role == Role::Teacher : s.role == Role::Plain;
    mask[static_cast<std::size_t>(actions::build_together(h))] = may_initiate;
  }
  for (int b = 0; b < kNumBallots; ++b) mask[static_cast<std::size_t>(actions::vote(b))] = 1;
  return mask;
}

AgentId Environment::choose_partner(AgentId initiator) const {
  const AgentState& a = agents_.at(static_cast<std::size_t>(initiator));
  const Position pa = world_.position(initiator);
  AgentId best = -1;
  std::tuple<int, int, int> best_key{};
  for (const AgentState& b : agents_) {
    if (b.id == initiator || !can_pair(config_.variant, a.role, b.role)) continue;
    const int dist = manhattan(pa, world_.position(b.id));
    const int align = config_.partner_rule == PartnerRule::LeastAligned ? pair_alignment(a.language, b.language) : 0;
    const std::tuple<int, int, int> key{align, dist, b.id};
    if (best < 0 || key < best_key) {
      best = b.id;
      best_key = key;
    }
  }
  return best;
}

BuildEvent Environment::do_build_alone(AgentId id, HouseType h) {
  AgentState& a = agents_[static_cast<std::size_t>(id)];
  a.labor += config_.labor.build_alone;
  BuildEvent ev{id, h, false, 0};
  if (config_.variant == Variant::Teaching && a.role == Role::Teacher) return ev;
  const auto r = recipe(h);
  auto& units = a.holdings.units;
  const auto m0 = static_cast<std::size_t>(index_of(r[0]));
  const auto m1 = static_cast<std::size_t>(index_of(r[1]));
  const Position p = world_.position(id);
  if (units[m0] < 1 || units[m1] < 1 || !world_.cell(p).buildable()) return ev;
  units[m0] -= 1;
  units[m1] -= 1;
  world_.place_house(p, h, {id});
  a.holdings.coin += a.build_skill_alone;
  ev.built = true;
  ev.income = a.build_skill_alone;
  return ev;
}

JointBuildEvent Environment::do_build_together(AgentId id, HouseType h) {
  AgentState& a = agents_[static_cast<std::size_t>(id)];
  a.labor += config_.labor.build_together;
  JointBuildEvent ev;
  ev.initiator = id;
  ev.house = h;
  ev.partner = choose_partner(id);
  if (ev.partner < 0) return ev;
  AgentState& b = agents_[static_cast<std::size_t>(ev.partner)];

  const auto r = recipe(h);
  const auto m0 = static_cast<std::size_t>(index_of(r[0]));
  const auto m1 = static_cast<std::size_t>(index_of(r[1]));
  auto& ua = a.holdings.units;
  auto& ub = b.holdings.units;
  const Position site = world_.position(id);
  const bool resources_ok = ua[m0] + ub[m0] >= 1 && ua[m1] + ub[m1] >= 1 && world_.cell(site).buildable();

  ev.outcome = attempt_joint_build(config_.variant, a.role, b.role, a.language, b.language, h, resources_ok);
  switch (ev.outcome.kind) {
    case JointBuildOutcome::Kind::Success: {
      if (ua[m0] >= 1 && ub[m1] >= 1) {
        ua[m0] -= 1;
        ub[m1] -= 1;
      } else if (ub[m0] >= 1 && ua[m1] >= 1) {
        ub[m0] -= 1;
        ua[m1] -= 1;
      } else if (ua[m0] >= 1 && ua[m1] >= 1) {
        ua[m0] -= 1;
        ua[m1] -= 1;
      } else {
        ub[m0] -= 1;
        ub[m1] -= 1;
      }
      world_.place_house(site, h, {id, ev.partner});
      if (config_.joint_payout == JointPayout::EachOwnSkill) {
        a.holdings.coin += a.build_skill_together;
        b.holdings.coin += b.build_skill_together;
      } else {
        a.holdings.coin += (a.build_skill_together + 1) / 2;
        b.holdings.coin += a.build_skill_together / 2;
      }
      b.labor += config_.labor.build_together;
      break;
    }
    case JointBuildOutcome::Kind::Corrected:
      a.holdings.coin += config_.small_reward;
      b.holdings.coin += config_.small_reward;
      break;
    case JointBuildOutcome::Kind::Invalid:
      break;
  }
  return ev;
}

void Environment::apply_planner(const PlannerAction& action) {
  if (action.rate_levels.size() != schedule_.rates.size()) {
    throw std::invalid_argument("planner action has " + std::to_string(action.rate_levels.size()) +
                                " rate levels for " + std::to_string(schedule_.rates.size()) + " brackets");
  }
  for (int level : action.rate_levels) {
    if (level < 0 || level >= config_.rate_levels) throw std::invalid_argument("planner rate level outside the grid");
  }
  if (action.ranking && (*action.ranking < 0 || *action.ranking >= kNumBallots)) {
    throw std::invalid_argument("planner ranking outside 0..23");
  }
  for (std::size_t j = 0; j < schedule_.rates.size(); ++j) {
    schedule_.rates[j] = rate_level(action.rate_levels[j], config_.rate_levels);
  }
  planner_ranking_ = action.ranking ? std::optional<Ballot>(ballot_from_index(*action.ranking)) : std::nullopt;
}

StepResult Environment::step(std::span<const int> joint_actions, const std::optional<PlannerAction>& planner) {
  if (done()) throw std::logic_error("episode already finished");
  const std::size_t n = agents_.size();
  if (joint_actions.size() != n) {
    throw std::invalid_argument("joint action has " + std::to_string(joint_actions.size()) + " entries for " +
                                std::to_string(n) + " agents");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int act = joint_actions[i];
    if (act < 0 || act >= actions::kCount) {
      throw std::invalid_argument("agent " + std::to_string(i) + ": action " + std::to_string(act) + " out of range");
    }
    if (!action_mask(static_cast<AgentId>(i))[static_cast<std::size_t>(act)]) {
      throw std::invalid_argument("agent " + std::to_string(i) + ": action " + actions::describe(act) +
                                  " is masked at t=" + std::to_string(t_));
    }
  }

  StepResult result;
  StepRecord& rec = result.record;
  rec.t = t_;
  rec.actions.assign(joint_actions.begin(), joint_actions.end());
  if (needs_planner_action()) {
    if (!planner) throw std::invalid_argument("planner action required at t=" + std::to_string(t_));
    apply_planner(*planner);
    rec.planner_action = planner;
  } else if (planner) {
    throw std::invalid_argument("planner acts only at the start of a tax period");
  }

  std::vector<actions::Decoded> decoded;
  decoded.reserve(n);
  for (int act : joint_actions) decoded.push_back(actions::decode(act));

  // (1) moves, gathering on arrival
  for (std::size_t i = 0; i < n; ++i) {
    if (decoded[i].kind != actions::Kind::Move) continue;
    AgentState& a = agents_[i];
    a.labor += config_.labor.move;
    if (!world_.move_agent(a.id, decoded[i].direction)) continue;
    const auto g = world_.gather(a.id, a.gather_skill, rng_);
    if (g.units > 0) {
      a.holdings.units[static_cast<std::size_t>(index_of(g.material))] += g.units;
      a.labor += config_.labor.gather;
    }
  }

  // (2) market
  {
    std::vector<Holdings> h = holdings_view();
    for (std::size_t i = 0; i < n; ++i) {
      if (decoded[i].kind != actions::Kind::Trade) continue;
      agents_[i].labor += config_.labor.trade;
      std::optional<Trade> trade;
      book_.place(static_cast<AgentId>(i), decoded[i].side, decoded[i].material, decoded[i].price, t_, h, rng_,
                  &trade);
      if (trade) {
        const auto mi = static_cast<std::size_t>(index_of(trade->material));
        trade_price_sum_[mi] += trade->price;
        trade_counts_[mi][static_cast<std::size_t>(trade->price)] += 1;
        rec.trades.push_back(*trade);
      }
    }
    book_.expire(t_, h);
    write_back(h);
  }

  // (3) builds
  for (std::size_t i = 0; i < n; ++i) {
    if (decoded[i].kind == actions::Kind::BuildAlone) {
      rec.builds.push_back(do_build_alone(static_cast<AgentId>(i), decoded[i].house));
    } else if (decoded[i].kind == actions::Kind::BuildTogether) {
      rec.joint_builds.push_back(do_build_together(static_cast<AgentId>(i), decoded[i].house));
    }
  }

  // (4) votes
  for (std::size_t i = 0; i < n; ++i) {
    if (decoded[i].kind != actions::Kind::Vote) continue;
    agents_[i].ballot = ballot_from_index(decoded[i].ballot);
    agents_[i].labor += config_.labor.vote;
  }

  // (5) regeneration
  world_.step_regen(rng_);

  // (6) tax period settlement
  if ((t_ + 1) % config_.tax_period == 0) {
    PeriodRecord pr;
    pr.period = static_cast<int>(t_ / config_.tax_period);
    pr.rates = schedule_.rates;
    std::vector<std::optional<Ballot>> ballots;
    std::vector<Ballot> cast;
    for (const auto& a : agents_) {
      ballots.push_back(a.ballot);
      pr.votes.push_back(a.ballot ? ballot_index(*a.ballot) : -1);
      if (a.ballot) cast.push_back(*a.ballot);
    }
    pr.borda = borda_count(cast);

    std::vector<Holdings> h = holdings_view();
    Coins before = 0;
    for (const auto& x : h) before += x.wealth();
    pr.taxes = settle_period(h, wealth_at_period_start_, schedule_, config_.revenue_mode, pr.period);
    Coins after = 0;
    for (const auto& x : h) after += x.wealth();
    if (config_.revenue_mode == RevenueMode::Redistribute && before != after) {
      throw InvariantViolation("coin total changed across settlement: " + std::to_string(before) + " -> " +
                               std::to_string(after));
    }
    write_back(h);

    pr.regen_before = world_.regen_rates();
    pr.investment = invest(config_.system, pr.taxes.paid, ballots, planner_ranking_, world_.regen_rates(),
                           config_.invest);
    world_.set_regen_rates(pr.investment.rates);

    previous_incomes_ = pr.taxes.income;
    for (std::size_t i = 0; i < n; ++i) {
      previous_marginal_rates_[i] =
          schedule_.marginal_rate(static_cast<double>(std::max<Coins>(pr.taxes.income[i], 0)));
      wealth_at_period_start_[i] = agents_[i].holdings.wealth();
      agents_[i].ballot.reset();
    }
    rec.period = std::move(pr);
  }

  // utilities and rewards
  rec.rewards.resize(n);
  rec.utility.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const AgentState& a = agents_[i];
    if (a.holdings.coin < 0 || a.holdings.escrow_coin < 0 || a.labor < 0) {
      throw InvariantViolation("negative balance for agent " + std::to_string(i));
    }
    for (std::size_t m = 0; m < kNumMaterials; ++m) {
      if (a.holdings.units[m] < 0 || a.holdings.escrow_units[m] < 0) {
        throw InvariantViolation("negative inventory for agent " + std::to_string(i));
      }
    }
    const double u = utility(static_cast<double>(a.holdings.wealth()), a.labor, config_.eta);
    rec.rewards[i] = agent_reward(u, utilities_[i]);
    utilities_[i] = u;
    rec.utility[i] = u;
  }
  const auto c = coins();
  const double swf = compute_swf(c, utilities_);
  rec.planner_reward = planner_reward(swf, swf_);
  swf_ = swf;
  rec.swf = swf;
  rec.metrics = metrics::snapshot(t_, c, utilities_);

  const auto langs = languages();
  rec.alignment = population_alignment(langs);
  for (std::size_t i = 0; i < n; ++i) {
    const AgentState& a = agents_[i];
    rec.languages.push_back(a.language.str());
    rec.coin.push_back(a.holdings.wealth());
    rec.labor.push_back(a.labor);
    std::array<std::int64_t, kNumMaterials> inv{};
    for (std::size_t m = 0; m < kNumMaterials; ++m) inv[m] = a.holdings.units[m] + a.holdings.escrow_units[m];
    rec.inventories.push_back(inv);
  }

  ++t_;
  result.done = done();
  if (!result.done) {
    result.observations.reserve(n);
    for (std::size_t i = 0; i < n; ++i) result.observations.push_back(observe_agent(static_cast<AgentId>(i)));
    if (needs_planner_action()) result.planner_observation = observe_planner();
  }
  return result;
}

void Environment::fill_spatial(std::vector<std::int16_t>& out, int x0, int y0, int w, int h, AgentId self) const {
  const auto plane = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  out.assign(plane * channel::kCount, 0);
  const auto at = [&](int ch, int dx, int dy) -> std::int16_t& {
    return out[static_cast<std::size_t>(ch) * plane + static_cast<std::size_t>(dy) * static_cast<std::size_t>(w) +
               static_cast<std::size_t>(dx)];
  };
  for (int dy = 0; dy < h; ++dy) {
    for (int dx = 0; dx < w; ++dx) {
      const Position p{x0 + dx, y0 + dy};
      if (!world_.in_bounds(p)) {
        at(channel::kBlocked, dx, dy) = 1;
        continue;
      }
      const Cell& c = world_.cell(p);
      if (c.obstacle) at(channel::kBlocked, dx, dy) = 1;
      if (c.deposit) at(channel::kDeposit + index_of(c.deposit->material), dx, dy) = static_cast<std::int16_t>(c.deposit->units);
      if (c.house) {
        at(c.house->type == HouseType::Red ? channel::kRedHouse : channel::kBlueHouse, dx, dy) = 1;
        if (self >= 0 && c.house->owned_by(self)) at(channel::kOwnHouse, dx, dy) = 1;
      }
      if (c.occupant) {
        at(channel::kAgent, dx, dy) = static_cast<std::int16_t>(*c.occupant + 1);
        if (*c.occupant == self) at(channel::kSelf, dx, dy) = 1;
      }
    }
  }
}

MarketView Environment::market_view(AgentId self) const {
  MarketView v;
  for (Material m : kMaterials) {
    const auto mi = static_cast<std::size_t>(index_of(m));
    for (Side s : {Side::Bid, Side::Ask}) {
      const auto si = static_cast<std::size_t>(s);
      if (self >= 0) v.own[mi][si] = book_.depth(m, s, self);
      v.others[mi][si] = book_.depth(m, s, -1, self);
    }
  }
  v.trade_counts = trade_counts_;
  for (std::size_t m = 0; m < kNumMaterials; ++m) {
    int count = 0;
    for (int c : trade_counts_[m]) count += c;
    v.average_price[m] = count ? trade_price_sum_[m] / count : 0.0;
  }
  return v;
}

TaxView Environment::tax_view() const {
  TaxView v;
  v.rates = schedule_.rates;
  v.cutoffs = schedule_.cutoffs;
  v.period_progress = static_cast<double>(t_ % config_.tax_period) / static_cast<double>(config_.tax_period);
  v.previous_incomes_sorted = previous_incomes_;
  std::sort(v.previous_incomes_sorted.begin(), v.previous_incomes_sorted.end());
  return v;
}

AgentObservation Environment::observe_agent(AgentId id) const {
  const AgentState& a = agents_.at(static_cast<std::size_t>(id));
  AgentObservation o;
  o.agent = id;
  o.t = t_;
  const Position p = world_.position(id);
  fill_spatial(o.spatial, p.x - kWindow / 2, p.y - kWindow / 2, kWindow, kWindow, id);
  o.holdings = a.holdings;
  o.labor = a.labor;
  o.build_skill_alone = a.build_skill_alone;
  o.build_skill_together = a.build_skill_together;
  o.gather_skill = a.gather_skill;
  o.role = a.role;
  o.language = a.language;
  o.market = market_view(id);
  o.tax = tax_view();
  const Coins income = a.holdings.wealth() - wealth_at_period_start_[static_cast<std::size_t>(id)];
  o.own_marginal_rate = schedule_.marginal_rate(static_cast<double>(std::max<Coins>(income, 0)));
  o.mask = action_mask(id);
  return o;
}

PlannerObservation Environment::observe_planner() const {
  PlannerObservation o;
  o.t = t_;
  o.width = world_.width();
  o.height = world_.height();
  fill_spatial(o.spatial, 0, 0, world_.width(), world_.height(), -1);
  for (const auto& a : agents_) {
    o.holdings.push_back(a.holdings);
    o.labor.push_back(a.labor);
    o.votes.push_back(a.ballot ? ballot_index(*a.ballot) : -1);
    o.languages.push_back(a.language);
    o.roles.push_back(a.role);
  }
  o.market = market_view(-1);
  o.tax = tax_view();
  o.previous_incomes = previous_incomes_;
  o.previous_marginal_rates = previous_marginal_rates_;
  o.rate_levels = config_.rate_levels;
  o.brackets = schedule_.brackets();
  o.period = static_cast<int>(t_ / config_.tax_period);
  return o;
}

}  // namespace aiecon
