#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aiecon/common.hpp"

namespace aiecon {

enum class GoverningSystem : std::uint8_t { FullLibertarian, SemiLibertarianUtilitarian, FullUtilitarian };

std::string_view to_string(GoverningSystem s);
std::optional<GoverningSystem> parse_governing_system(std::string_view s);

// What happens to collected tax coins at the end of a period.
enum class RevenueMode : std::uint8_t {
  Redistribute,  // revenue is split evenly back to the agents; investment is a rate signal only
  Sink,          // revenue leaves the economy as investment
};

// Marginal-rate brackets. cutoffs[j] is the lower edge of bracket j, the
// first edge is 0 and the last bracket is unbounded above.
struct TaxSchedule {
  std::vector<double> cutoffs{0, 10, 25, 50, 100, 200, 400};
  std::vector<double> rates = std::vector<double>(7, 0.0);

  static TaxSchedule flat(double rate);
  static TaxSchedule with_rates(std::vector<double> rates);

  int brackets() const { return static_cast<int>(rates.size()); }
  void validate() const;
  // Rate of the bracket containing income z (z on an edge belongs to the lower bracket).
  double marginal_rate(double z) const;
};

inline constexpr int kDefaultRateLevels = 21;  // {0, 0.05, ..., 1.0}

// Rate for level k on a grid of `levels` evenly spaced points over [0, 1].
inline double rate_level(int k, int levels = kDefaultRateLevels) {
  return static_cast<double>(k) / static_cast<double>(levels - 1);
}

double compute_tax(double z, const TaxSchedule& schedule);

struct TaxPeriodOutcome {
  int period = 0;
  std::vector<Coins> income;  // pretax income z_i (wealth change over the period)
  std::vector<double> tax;    // T(z_i)
  std::vector<Coins> paid;    // whole coins actually collected
  std::vector<Coins> delta;   // net coin change -paid_i + share_i
  Coins revenue = 0;
};

// Collects floor(T(z_i)) whole coins from each agent (never more than its
// free coin) and, in Redistribute mode, hands the revenue back in equal whole
// shares with the remainder going one coin each to agents in an order that
// rotates with the period index. Holdings are updated in place.
TaxPeriodOutcome settle_period(std::span<Holdings> agents, std::span<const Coins> wealth_at_start,
                               const TaxSchedule& schedule, RevenueMode mode, int period);

// A ranking of the four materials, most preferred first.
using Ballot = std::array<Material, kNumMaterials>;

inline constexpr int kNumBallots = 24;

// Lexicographic enumeration of the 24 permutations of (Wood, Stone, Iron, Soil).
Ballot ballot_from_index(int k);
int ballot_index(const Ballot& b);
bool is_permutation(const Ballot& b);

struct BordaResult {
  Ballot ranking{};
  std::array<int, kNumMaterials> scores{};  // indexed by material
};

// Positional tally awarding 3, 2, 1, 0 points. Ties order by material index.
BordaResult borda_count(std::span<const Ballot> ballots);

// Normalized positional weights (3, 2, 1, 0) / 6, indexed by material.
std::array<double, kNumMaterials> ranking_weights(const Ballot& b);

struct InvestConfig {
  double kappa = 0.005;  // regeneration-probability increase per invested coin
  double regen_max = 0.2;
};

struct InvestmentResult {
  std::array<double, kNumMaterials> invested{};  // coins per material
  std::array<double, kNumMaterials> delta{};     // kappa * invested, before clipping
  std::array<double, kNumMaterials> rates{};     // new rates after clipping to [0, regen_max]
};

// Spreads tax revenue over the materials. Full-libertarian: each agent's
// paid tax follows its own ballot. Semi: total revenue follows the Borda
// ranking of all ballots cast. Full-utilitarian: total revenue follows the
// planner's ranking. Missing ballots or rankings weight materials uniformly.
InvestmentResult invest(GoverningSystem system, std::span<const Coins> paid,
                        std::span<const std::optional<Ballot>> ballots,
                        const std::optional<Ballot>& planner_ranking,
                        const std::array<double, kNumMaterials>& current_rates,
                        const InvestConfig& config);

}  // namespace aiecon
