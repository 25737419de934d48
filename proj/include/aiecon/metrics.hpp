#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aiecon/common.hpp"

namespace aiecon::metrics {

// Gini index over coin endowments; 0 when every endowment is zero.
double gini(std::span<const double> coins);
// 1 - N/(N-1) * gini, in [0, 1].
double equality(std::span<const double> coins);
double productivity(std::span<const double> coins);
// Worst-off agent's coin endowment.
double maximin(std::span<const double> coins);

inline constexpr double kMinCoin = 1e-6;

// Inverse-income weights, normalized to sum to one. Endowments below
// kMinCoin are clamped to it.
std::vector<double> inverse_income_weights(std::span<const double> coins);
double swf_inverse_income(std::span<const double> utilities, std::span<const double> coins);
double swf_eq_prod(std::span<const double> coins);

// Pearson correlation; nullopt when the inputs are too short or either
// series has zero variance.
std::optional<double> correlate(std::span<const double> x, std::span<const double> y);

struct Snapshot {
  Step step = 0;
  double eq = 1.0;
  double gini = 0.0;
  double prod = 0.0;
  double maximin = 0.0;
  double swf_inverse_income = 0.0;
  double swf_eq_times_prod = 0.0;
};

Snapshot snapshot(Step step, std::span<const double> coins, std::span<const double> utilities);

}  // namespace aiecon::metrics
