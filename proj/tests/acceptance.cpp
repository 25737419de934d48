// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "aiecon/episode.hpp"
#include "aiecon/fiscal.hpp"
#include "aiecon/iafit.hpp"
#include "aiecon/language.hpp"
#include "aiecon/market.hpp"
#include "aiecon/metrics.hpp"
#include "aiecon/policy.hpp"
#include "aiecon/sweep.hpp"
#include "oracles.hpp"

using namespace aiecon;

namespace {

// Pinned tolerances and budgets.
constexpr double kTaxTol = 1e-9;
constexpr double kTaxBudgetSec = 5.0;
constexpr double kAuctionBudgetSec = 30.0;
constexpr double kFitBudgetSec = 60.0;
constexpr double kMetricHandTol = 1e-6;
constexpr double kScaleTol = 1e-12;
constexpr double kTelescopeTol = 1e-9;
constexpr double kAlphaStep = 0.5;
constexpr double kBetaStep = 0.1;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

class RandomRatePlanner final : public PlannerPolicy {
 public:
  PlannerAction act(const PlannerObservation& obs, Rng& rng) override {
    PlannerAction a;
    for (int j = 0; j < obs.brackets; ++j) a.rate_levels.push_back(static_cast<int>(rng.below(21)));
    a.ranking = static_cast<int>(rng.below(kNumBallots));
    return a;
  }
};

EpisodeLog random_episode(std::uint64_t seed, GoverningSystem system) {
  EpisodeConfig c;
  c.horizon = 1000;
  c.system = system;
  c.variant = seed % 2 ? Variant::Teaching : Variant::Communication;
  c.objective = seed % 3 ? PlannerObjective::EqTimesProd : PlannerObjective::InverseIncome;
  std::vector<std::unique_ptr<AgentPolicy>> agents;
  for (int i = 0; i < c.num_agents(); ++i) agents.push_back(std::make_unique<RandomPolicy>());
  RandomRatePlanner planner;
  return run_episode(c, agents, planner, split_seed(0xacce, seed));
}

Outcome tax_engine() {
  Rng rng(1);
  double worst = 0.0;
  for (int k = 0; k < 100000; ++k) {
    TaxSchedule s;
    const int brackets = 1 + static_cast<int>(rng.below(7));
    s.cutoffs = {0.0};
    for (int j = 1; j < brackets; ++j) s.cutoffs.push_back(s.cutoffs.back() + 1.0 + 200.0 * rng.uniform01());
    s.rates.clear();
    for (int j = 0; j < brackets; ++j) s.rates.push_back(rate_level(static_cast<int>(rng.below(21))));
    const double z = 1500.0 * rng.uniform01();
    const double t = compute_tax(z, s);
    worst = std::max(worst, std::fabs(t - oracle::tax(z, s.cutoffs, s.rates)));
    if (compute_tax(z + 10.0 * rng.uniform01(), s) < t) return fail("not monotone at z=" + std::to_string(z));
  }
  if (worst > kTaxTol) return fail("max error " + sci(worst));
  return {true, "max error " + sci(worst)};
}

// Coin enters only through build income and joint-build payouts; trades and
// redistribution move it around. Tally minted coin independently and compare
// with total wealth at every period boundary.
Outcome closed_economy() {
  long boundaries = 0;
  for (std::uint64_t e = 0; e < 100; ++e) {
    const auto log = random_episode(e, static_cast<GoverningSystem>(e % 3));
    const auto& cfg = log.header.config;
    Coins minted = std::accumulate(log.header.coin.begin(), log.header.coin.end(), Coins{0});
    for (const auto& s : log.steps) {
      for (const auto& b : s.builds) minted += b.income;
      for (const auto& j : s.joint_builds) {
        if (j.outcome.kind == JointBuildOutcome::Kind::Corrected) minted += 2 * cfg.small_reward;
        if (j.outcome.kind == JointBuildOutcome::Kind::Success) {
          const auto& skill = log.header.build_skill_together;
          minted += cfg.joint_payout == JointPayout::EachOwnSkill
                        ? skill[static_cast<std::size_t>(j.initiator)] + skill[static_cast<std::size_t>(j.partner)]
                        : skill[static_cast<std::size_t>(j.initiator)];
        }
      }
      if (!s.period) continue;
      const Coins total = std::accumulate(s.coin.begin(), s.coin.end(), Coins{0});
      if (total != minted || std::accumulate(s.period->taxes.delta.begin(), s.period->taxes.delta.end(), Coins{0}) != 0) {
        return fail("episode " + std::to_string(e) + " period " + std::to_string(s.period->period) + ": total " +
                    std::to_string(total) + " vs minted " + std::to_string(minted));
      }
      ++boundaries;
    }
  }
  return {true, std::to_string(boundaries) + " period boundaries"};
}

Outcome auction() {
  {
    OrderBook book;
    std::vector<Holdings> h(3);
    for (auto& x : h) {
      x.coin = 10;
      x.units.fill(1);
    }
    Rng rng(0);
    book.place(1, Side::Ask, Material::Stone, 3, 0, h, rng);
    book.place(2, Side::Ask, Material::Stone, 7, 1, h, rng);
    std::optional<Trade> t;
    book.place(0, Side::Bid, Material::Stone, 8, 2, h, rng, &t);
    if (!t || t->price != 3 || t->seller != 1 || h[0].coin != 7) return fail("worked example");
  }
  long trades = 0;
  for (std::uint64_t stream = 0; stream < 10000; ++stream) {
    Rng gen(split_seed(0xa0c7, stream));
    const int n = 2 + static_cast<int>(gen.below(7));
    const bool dense = stream % 2 == 0;
    const int materials = dense ? 2 : 4;
    const long expiry = dense ? 6 : 50;
    std::vector<Holdings> h(static_cast<std::size_t>(n));
    std::vector<oracle::ReferenceBook::Account> ref(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < h.size(); ++i) {
      h[i].coin = ref[i].coin = static_cast<Coins>(gen.below(40));
      for (std::size_t m = 0; m < 4; ++m) h[i].units[m] = ref[i].units[m] = static_cast<long>(gen.below(5));
    }
    OrderBook book(MarketConfig{5, OrderCapMode::PerSide, expiry});
    oracle::ReferenceBook reference(5, expiry);
    Rng rb(stream), rr(stream);
    std::vector<Trade> got;
    std::vector<oracle::ReferenceBook::Fill> want;
    for (Step t = 0; t < 120; ++t) {
      const int events = static_cast<int>(gen.below(5));
      for (int k = 0; k < events; ++k) {
        const int agent = static_cast<int>(gen.below(static_cast<std::uint64_t>(n)));
        const int side = static_cast<int>(gen.below(2));
        const int material = static_cast<int>(gen.below(static_cast<std::uint64_t>(materials)));
        const int price = static_cast<int>(gen.below(11));
        std::optional<Trade> g;
        book.place(agent, static_cast<Side>(side), static_cast<Material>(material), price, t, h, rb, &g);
        if (g) got.push_back(*g);
        if (auto w = reference.place(agent, side, material, price, t, ref, rr)) want.push_back(*w);
      }
      book.expire(t, h);
      reference.expire(t, ref);
    }
    if (got.size() != want.size()) return fail("stream " + std::to_string(stream) + ": trade count differs");
    for (std::size_t k = 0; k < got.size(); ++k) {
      const auto& a = got[k];
      const auto& b = want[k];
      if (index_of(a.material) != b.material || a.price != b.price || a.buyer != b.buyer || a.seller != b.seller ||
          a.bid_id != b.bid_id || a.ask_id != b.ask_id) {
        return fail("stream " + std::to_string(stream) + ": trade " + std::to_string(k) + " differs");
      }
    }
    trades += static_cast<long>(got.size());
  }
  return {true, "10000 streams, " + std::to_string(trades) + " trades identical"};
}

Outcome borda() {
  for (int k = 0; k < kNumBallots; ++k) {
    const std::vector<Ballot> same(1 + static_cast<std::size_t>(k % 7), ballot_from_index(k));
    if (borda_count(same).ranking != ballot_from_index(k)) return fail("unanimity for ballot " + std::to_string(k));
  }
  Rng rng(4);
  for (int k = 0; k < 100000; ++k) {
    const int n = 1 + static_cast<int>(rng.below(12));
    std::vector<Ballot> ballots;
    std::vector<std::array<int, 4>> raw;
    for (int i = 0; i < n; ++i) {
      const Ballot b = ballot_from_index(static_cast<int>(rng.below(24)));
      ballots.push_back(b);
      raw.push_back({index_of(b[0]), index_of(b[1]), index_of(b[2]), index_of(b[3])});
    }
    const auto got = borda_count(ballots);
    const auto want = oracle::borda(raw);
    for (std::size_t m = 0; m < 4; ++m) {
      if (got.scores[m] != want.scores[m] || index_of(got.ranking[m]) != want.ranking[m]) {
        return fail("case " + std::to_string(k));
      }
    }
  }
  return {true, "100000 multisets"};
}

Outcome language_convergence() {
  std::string detail;
  for (auto sys : {GoverningSystem::FullLibertarian, GoverningSystem::SemiLibertarianUtilitarian,
                   GoverningSystem::FullUtilitarian}) {
    EpisodeConfig c;
    c.variant = Variant::Teaching;
    c.system = sys;
    c.policy.agent = "scripted_teach";
    c.horizon = 100;
    const auto log = run_episode(c, 7);
    int attempts = 0;
    double prev = population_alignment(init_languages(Variant::Teaching, c.num_agents()));
    bool reached = false;
    for (const auto& s : log.steps) {
      attempts += static_cast<int>(s.joint_builds.size());
      if (s.alignment < prev) return fail(std::string(to_string(sys)) + ": alignment fell");
      prev = s.alignment;
      if (s.alignment == 4.0 && !reached) {
        reached = true;
        if (attempts > 12) return fail(std::string(to_string(sys)) + ": " + std::to_string(attempts) + " attempts");
        detail += std::string(to_string(sys)) + "=" + std::to_string(attempts) + " ";
      }
    }
    if (!reached) return fail(std::string(to_string(sys)) + ": never reached 4");
  }
  return {true, "attempts " + detail};
}

Outcome language_metric() {
  const auto brute = [](const std::vector<LanguageMap>& maps) {
    int total = 0, pairs = 0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
      for (std::size_t j = i + 1; j < maps.size(); ++j) {
        const std::string a = maps[i].str(), b = maps[j].str();
        for (std::size_t k = 0; k < 4; ++k) total += a[k] == b[k];
        ++pairs;
      }
    }
    return pairs == 15 ? static_cast<double>(total) / pairs : -1.0;
  };
  const auto comm = init_languages(Variant::Communication, 6);
  const auto teach = init_languages(Variant::Teaching, 6);
  if (brute(comm) != 8.0 / 15.0 || population_alignment(comm) != 8.0 / 15.0) return fail("communication");
  if (brute(teach) != 0.8 || population_alignment(teach) != 0.8) return fail("teaching");
  return {true, "8/15 and 0.8"};
}

Outcome ia_fit() {
  iafit::FitOptions opts;
  opts.base = iafit::BaseTerm::Raw;
  const auto grid = iafit::Grid::standard();
  Rng rng(17);
  int pair = 0;
  for (double a : grid.alpha) {
    for (double b : grid.beta) {
      iafit::Traces base(6, iafit::Series(1000));
      for (auto& s : base) {
        for (auto& x : s) x = 4.0 * rng.uniform01() - 1.0;
      }
      const auto u = iafit::synth_subjective(base, a, b, opts.gamma, opts.lambda);
      for (std::size_t i = 0; i < 6; ++i) {
        const auto r = iafit::fit(u, base, i, opts);
        if (r.alpha != a || r.beta != b) {
          return fail("on-grid (" + std::to_string(a) + ", " + std::to_string(b) + ") agent " + std::to_string(i));
        }
      }
      ++pair;
    }
  }
  double worst_a = 0.0, worst_b = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double a = 0.5 + 4.0 * rng.uniform01(), b = 0.1 + 0.8 * rng.uniform01();
    iafit::Traces base(6, iafit::Series(1000));
    for (auto& s : base) {
      for (auto& x : s) x = 4.0 * rng.uniform01() - 1.0;
    }
    const auto u = iafit::synth_subjective(base, a, b, opts.gamma, opts.lambda);
    for (std::size_t i = 0; i < 6; ++i) {
      const auto r = iafit::fit(u, base, i, opts);
      worst_a = std::max(worst_a, std::fabs(r.alpha - a));
      worst_b = std::max(worst_b, std::fabs(r.beta - b));
    }
  }
  if (worst_a > kAlphaStep || worst_b > kBetaStep) {
    return fail("off-grid max |da|=" + sci(worst_a) + " |db|=" + sci(worst_b));
  }
  return {true, std::to_string(pair) + " on-grid pairs exact; off-grid max |da|=" + sci(worst_a) +
                    " |db|=" + sci(worst_b)};
}

Outcome metrics_check() {
  const std::vector<double> hand{1, 2, 3};
  if (std::fabs(metrics::gini(hand) - 0.2222) > 1e-4 + kMetricHandTol ||
      std::fabs(metrics::gini(hand) - 2.0 / 9.0) > kMetricHandTol ||
      std::fabs(metrics::equality(hand) - 2.0 / 3.0) > kMetricHandTol ||
      std::fabs(metrics::productivity(hand) - 6.0) > kMetricHandTol) {
    return fail("hand values");
  }
  Rng rng(8);
  double worst_scale = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const std::size_t n = 2 + rng.below(20);
    std::vector<double> c(n);
    for (auto& x : c) x = rng.bernoulli(0.1) ? 0.0 : 1000.0 * rng.uniform01();
    const double g = metrics::gini(c), eq = metrics::equality(c);
    const double cap = (static_cast<double>(n) - 1.0) / static_cast<double>(n);
    if (g < 0.0 || g > cap + 1e-15 || eq < -1e-15 || eq > 1.0) return fail("bounds at case " + std::to_string(k));
    const double s = 1e-3 + 1e3 * rng.uniform01();
    std::vector<double> scaled(c);
    for (auto& x : scaled) x *= s;
    worst_scale = std::max(worst_scale, std::fabs(metrics::gini(scaled) - g));
  }
  if (worst_scale > kScaleTol) return fail("scale error " + sci(worst_scale));
  return {true, "scale error " + sci(worst_scale)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  for (std::uint64_t seed : {1ULL, 99ULL, 123456789ULL}) {
    for (auto v : {Variant::Communication, Variant::Teaching}) {
      EpisodeConfig c;
      c.variant = v;
      c.policy.agent = "softmax";
      if (to_jsonl(run_episode(c, seed)) != to_jsonl(run_episode(c, seed))) {
        return fail("episode log differs for seed " + std::to_string(seed));
      }
    }
  }
  const auto kvs = parse_key_values(
      "variants = [communication, teaching]\n"
      "systems = [full_libertarian, semi_libertarian_utilitarian, full_utilitarian]\n"
      "objectives = [inverse_income, eq_times_prod]\n"
      "master_seed = 2024\nwrite_logs = true\n");
  const Manifest m = parse_manifest(kvs, std::filesystem::current_path());
  const auto root = std::filesystem::temp_directory_path() / "aiecon_acceptance";
  std::filesystem::remove_all(root);
  write_sweep_outputs(run_sweep_parallel(m, 1), m, root / "j1");
  write_sweep_outputs(run_sweep_parallel(m, 4), m, root / "j4");
  int files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root / "j1")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), root / "j1");
    if (slurp(entry.path()) != slurp(root / "j4" / rel)) return fail("sweep file differs: " + rel.string());
    ++files;
  }
  std::filesystem::remove_all(root);
  return {true, "6 episode pairs identical; " + std::to_string(files) + " sweep files identical for jobs 1 vs 4"};
}

Outcome telescoping() {
  double worst = 0.0;
  for (std::uint64_t e = 0; e < 100; ++e) {
    const auto log = random_episode(1000 + e, static_cast<GoverningSystem>(e % 3));
    const auto& u0 = log.header.utility;
    std::vector<double> sum(u0.size(), 0.0);
    double planner = 0.0;
    for (const auto& s : log.steps) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += s.rewards[i];
      planner += s.planner_reward;
    }
    const auto& last = log.steps.back();
    for (std::size_t i = 0; i < sum.size(); ++i) worst = std::max(worst, std::fabs(sum[i] - (last.utility[i] - u0[i])));
    worst = std::max(worst, std::fabs(planner - (last.swf - log.header.swf)));
  }
  if (worst > kTelescopeTol) return fail("max error " + sci(worst));
  return {true, "max error " + sci(worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
    double budget_sec;  // 0: no runtime bound
  };
  const std::vector<Criterion> criteria{
      {1, "tax engine vs piecewise oracle", tax_engine, kTaxBudgetSec},
      {2, "closed economy conserves coin", closed_economy, 0},
      {3, "auction vs reference matcher", auction, kAuctionBudgetSec},
      {4, "borda vs positional tally", borda, 0},
      {5, "teaching convergence under all systems", language_convergence, 0},
      {6, "initial population alignment", language_metric, 0},
      {7, "inequity-aversion fit round trip", ia_fit, kFitBudgetSec},
      {8, "metrics values and bounds", metrics_check, 0},
      {9, "determinism", determinism, 0},
      {10, "reward telescoping", telescoping, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_sec > 0 && sec > c.budget_sec) {
      o.pass = false;
      o.detail += "; over budget " + std::to_string(c.budget_sec) + " s";
    }
    failed += !o.pass;
    std::printf("%s %2d %-40s %7.2f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, sec, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
