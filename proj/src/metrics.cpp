#include "aiecon/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace aiecon::metrics {

double gini(std::span<const double> coins) {
  const std::size_t n = coins.size();
  if (n < 2) throw std::invalid_argument("gini needs at least two agents");
  const double total = std::accumulate(coins.begin(), coins.end(), 0.0);
  if (total <= 0.0) return 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) diff += std::abs(coins[i] - coins[j]);
  }
  return diff / (2.0 * static_cast<double>(n) * total);
}

double equality(std::span<const double> coins) {
  const auto n = static_cast<double>(coins.size());
  return 1.0 - n / (n - 1.0) * gini(coins);
}

double productivity(std::span<const double> coins) {
  return std::accumulate(coins.begin(), coins.end(), 0.0);
}

double maximin(std::span<const double> coins) {
  if (coins.empty()) throw std::invalid_argument("maximin needs at least one agent");
  return *std::min_element(coins.begin(), coins.end());
}

std::vector<double> inverse_income_weights(std::span<const double> coins) {
  std::vector<double> w(coins.size());
  double total = 0.0;
  for (std::size_t i = 0; i < coins.size(); ++i) {
    w[i] = 1.0 / std::max(coins[i], kMinCoin);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

double swf_inverse_income(std::span<const double> utilities, std::span<const double> coins) {
  if (utilities.size() != coins.size()) throw std::invalid_argument("utility/coin size mismatch");
  const auto w = inverse_income_weights(coins);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * utilities[i];
  return s;
}

double swf_eq_prod(std::span<const double> coins) { return equality(coins) * productivity(coins); }

std::optional<double> correlate(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) return std::nullopt;
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Snapshot snapshot(Step step, std::span<const double> coins, std::span<const double> utilities) {
  Snapshot s;
  s.step = step;
  s.gini = gini(coins);
  s.eq = 1.0 - static_cast<double>(coins.size()) / static_cast<double>(coins.size() - 1) * s.gini;
  s.prod = productivity(coins);
  s.maximin = maximin(coins);
  s.swf_inverse_income = swf_inverse_income(utilities, coins);
  s.swf_eq_times_prod = s.eq * s.prod;
  return s;
}

}  // namespace aiecon::metrics
