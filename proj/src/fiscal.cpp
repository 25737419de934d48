#include "aiecon/fiscal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace aiecon {

std::string_view to_string(GoverningSystem s) {
  switch (s) {
    case GoverningSystem::FullLibertarian: return "full_libertarian";
    case GoverningSystem::SemiLibertarianUtilitarian: return "semi_libertarian_utilitarian";
    case GoverningSystem::FullUtilitarian: return "full_utilitarian";
  }
  return "?";
}

std::optional<GoverningSystem> parse_governing_system(std::string_view s) {
  if (s == "full_libertarian" || s == "libertarian") return GoverningSystem::FullLibertarian;
  if (s == "semi_libertarian_utilitarian" || s == "semi") return GoverningSystem::SemiLibertarianUtilitarian;
  if (s == "full_utilitarian" || s == "utilitarian") return GoverningSystem::FullUtilitarian;
  return std::nullopt;
}

TaxSchedule TaxSchedule::flat(double rate) {
  TaxSchedule s;
  s.cutoffs = {0};
  s.rates = {rate};
  return s;
}

TaxSchedule TaxSchedule::with_rates(std::vector<double> rates) {
  TaxSchedule s;
  s.rates = std::move(rates);
  return s;
}

void TaxSchedule::validate() const {
  if (rates.empty()) throw ConfigError("tax schedule needs at least one bracket");
  if (cutoffs.size() != rates.size()) {
    throw ConfigError("tax schedule has " + std::to_string(cutoffs.size()) + " cutoffs for " +
                      std::to_string(rates.size()) + " rates");
  }
  if (cutoffs.front() != 0.0) throw ConfigError("first bracket must start at 0");
  for (std::size_t j = 1; j < cutoffs.size(); ++j) {
    if (!(cutoffs[j] > cutoffs[j - 1]) || !std::isfinite(cutoffs[j])) {
      throw ConfigError("bracket cutoffs must be finite and strictly ascending");
    }
  }
  for (double r : rates) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("marginal rates must lie in [0,1]");
  }
}

double TaxSchedule::marginal_rate(double z) const {
  for (std::size_t j = rates.size(); j-- > 0;) {
    if (z > cutoffs[j]) return rates[j];
  }
  return rates.front();
}

double compute_tax(double z, const TaxSchedule& schedule) {
  if (z <= 0.0) return 0.0;
  double tax = 0.0;
  const std::size_t b = schedule.rates.size();
  for (std::size_t j = 0; j < b; ++j) {
    const double lo = schedule.cutoffs[j];
    const double hi = j + 1 < b ? schedule.cutoffs[j + 1] : std::numeric_limits<double>::infinity();
    if (z > hi) {
      tax += schedule.rates[j] * (hi - lo);
    } else if (z > lo) {
      tax += schedule.rates[j] * (z - lo);
    }
  }
  return tax;
}

TaxPeriodOutcome settle_period(std::span<Holdings> agents, std::span<const Coins> wealth_at_start,
                               const TaxSchedule& schedule, RevenueMode mode, int period) {
  const std::size_t n = agents.size();
  if (wealth_at_start.size() != n) throw std::invalid_argument("wealth baseline size mismatch");
  TaxPeriodOutcome out;
  out.period = period;
  out.income.resize(n);
  out.tax.resize(n);
  out.paid.resize(n);
  out.delta.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Coins z = agents[i].wealth() - wealth_at_start[i];
    out.income[i] = z;
    out.tax[i] = compute_tax(static_cast<double>(std::max<Coins>(z, 0)), schedule);
    // Tolerance absorbs representation error in rates such as 0.05 * 20.
    const auto owed = static_cast<Coins>(std::floor(out.tax[i] + 1e-9));
    out.paid[i] = std::clamp<Coins>(owed, 0, agents[i].coin);
    out.revenue += out.paid[i];
  }

  for (std::size_t i = 0; i < n; ++i) out.delta[i] = -out.paid[i];
  if (mode == RevenueMode::Redistribute && n > 0) {
    const auto nn = static_cast<Coins>(n);
    const Coins share = out.revenue / nn;
    const Coins remainder = out.revenue % nn;
    for (std::size_t i = 0; i < n; ++i) out.delta[i] += share;
    for (Coins k = 0; k < remainder; ++k) {
      out.delta[static_cast<std::size_t>((static_cast<Coins>(period) + k) % nn)] += 1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) agents[i].coin += out.delta[i];
  return out;
}

Ballot ballot_from_index(int k) {
  if (k < 0 || k >= kNumBallots) throw std::out_of_range("ballot index outside 0..23");
  std::array<int, kNumMaterials> perm{0, 1, 2, 3};
  for (int i = 0; i < k; ++i) std::next_permutation(perm.begin(), perm.end());
  Ballot b{};
  for (std::size_t i = 0; i < perm.size(); ++i) b[i] = static_cast<Material>(perm[i]);
  return b;
}

bool is_permutation(const Ballot& b) {
  std::array<bool, kNumMaterials> seen{};
  for (Material m : b) {
    const int i = index_of(m);
    if (i < 0 || i >= kNumMaterials || seen[static_cast<std::size_t>(i)]) return false;
    seen[static_cast<std::size_t>(i)] = true;
  }
  return true;
}

int ballot_index(const Ballot& b) {
  if (!is_permutation(b)) throw std::invalid_argument("ballot is not a permutation");
  // Lehmer code.
  int k = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    int smaller = 0;
    for (std::size_t j = i + 1; j < b.size(); ++j) smaller += index_of(b[j]) < index_of(b[i]) ? 1 : 0;
    int fact = 1;
    for (std::size_t f = 2; f < b.size() - i; ++f) fact *= static_cast<int>(f);
    k += smaller * fact;
  }
  return k;
}

BordaResult borda_count(std::span<const Ballot> ballots) {
  BordaResult r;
  for (const Ballot& b : ballots) {
    for (std::size_t pos = 0; pos < b.size(); ++pos) {
      r.scores[static_cast<std::size_t>(index_of(b[pos]))] += kNumMaterials - 1 - static_cast<int>(pos);
    }
  }
  std::array<int, kNumMaterials> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return r.scores[static_cast<std::size_t>(a)] > r.scores[static_cast<std::size_t>(b)];
  });
  for (std::size_t i = 0; i < order.size(); ++i) r.ranking[i] = static_cast<Material>(order[i]);
  return r;
}

std::array<double, kNumMaterials> ranking_weights(const Ballot& b) {
  std::array<double, kNumMaterials> w{};
  for (std::size_t pos = 0; pos < b.size(); ++pos) {
    w[static_cast<std::size_t>(index_of(b[pos]))] = static_cast<double>(kNumMaterials - 1 - static_cast<int>(pos)) / 6.0;
  }
  return w;
}

namespace {

constexpr std::array<double, kNumMaterials> kUniform{0.25, 0.25, 0.25, 0.25};

std::array<double, kNumMaterials> weights_or_uniform(const std::optional<Ballot>& b) {
  return b ? ranking_weights(*b) : kUniform;
}

}  // namespace

InvestmentResult invest(GoverningSystem system, std::span<const Coins> paid,
                        std::span<const std::optional<Ballot>> ballots,
                        const std::optional<Ballot>& planner_ranking,
                        const std::array<double, kNumMaterials>& current_rates,
                        const InvestConfig& config) {
  InvestmentResult r;
  const Coins revenue = std::accumulate(paid.begin(), paid.end(), Coins{0});

  std::array<double, kNumMaterials> shares{};
  switch (system) {
    case GoverningSystem::FullLibertarian:
      for (std::size_t i = 0; i < paid.size(); ++i) {
        const auto w = weights_or_uniform(i < ballots.size() ? ballots[i] : std::nullopt);
        for (std::size_t m = 0; m < w.size(); ++m) r.invested[m] += static_cast<double>(paid[i]) * w[m];
      }
      break;
    case GoverningSystem::SemiLibertarianUtilitarian: {
      std::vector<Ballot> cast;
      for (const auto& b : ballots) {
        if (b) cast.push_back(*b);
      }
      shares = cast.empty() ? kUniform : ranking_weights(borda_count(cast).ranking);
      for (std::size_t m = 0; m < shares.size(); ++m) r.invested[m] = static_cast<double>(revenue) * shares[m];
      break;
    }
    case GoverningSystem::FullUtilitarian:
      shares = weights_or_uniform(planner_ranking);
      for (std::size_t m = 0; m < shares.size(); ++m) r.invested[m] = static_cast<double>(revenue) * shares[m];
      break;
  }

  for (std::size_t m = 0; m < r.invested.size(); ++m) {
    r.delta[m] = config.kappa * r.invested[m];
    r.rates[m] = std::clamp(current_rates[m] + r.delta[m], 0.0, config.regen_max);
  }
  return r;
}

}  // namespace aiecon
