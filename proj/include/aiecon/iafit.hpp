#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace aiecon::iafit {

using Series = std::vector<double>;
using Traces = std::vector<Series>;  // [agent][t], equal lengths

// e^t = gamma * lambda * e^(t-1) + r^t with e^0 = r^0.
Series smooth(std::span<const double> rewards, double gamma, double lambda);
Traces smooth(const Traces& rewards, double gamma, double lambda);

// Disadvantageous and advantageous inequity of one agent against the rest,
// each already divided by N - 1:
//   disadvantage^t = sum_{j != i} max(e_j^t - e_i^t, 0) / (N - 1)
//   advantage^t    = sum_{j != i} max(e_i^t - e_j^t, 0) / (N - 1)
struct Regressors {
  Series disadvantage;
  Series advantage;
};

Regressors inequity_regressors(const Traces& smoothed, std::size_t agent);

// Subjective rewards u_i = r_i - alpha * disadvantage_i - beta * advantage_i
// for every agent, with the inequity terms taken from smoothed base traces.
Traces synth_subjective(const Traces& base, double alpha, double beta, double gamma, double lambda);

struct Grid {
  std::vector<double> alpha;
  std::vector<double> beta;

  // Steps of 0.5 over (0, 5) and 0.1 over (0, 1); `inclusive` adds the endpoints.
  static Grid standard(bool inclusive = false);
};

// Which series the fitted model subtracts the inequity terms from.
enum class BaseTerm {
  Smoothed,  // e_i^t, the smoothed trace of the agent being fitted
  Raw,       // r_i^t of the trace source, the form used by synth_subjective
};

struct FitOptions {
  double gamma = 0.99;
  double lambda = 0.5;
  Grid grid = Grid::standard();
  BaseTerm base = BaseTerm::Smoothed;
  bool parallel = true;
};

struct FitResult {
  std::size_t agent = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double residual = 0.0;
  bool alpha_identifiable = true;
  bool beta_identifiable = true;
  std::size_t window_start = 0;
  std::size_t window_length = 0;

  // "ok", "alpha_unidentifiable", "beta_unidentifiable" or "unidentifiable".
  std::string flag() const;
};

// Grid search for the (alpha, beta) minimizing
//   sum_t (observed_i^t - [base_i^t - alpha * D_i^t - beta * A_i^t])^2
// where D and A come from smoothing `trace_source`. Ties go to the smallest
// alpha, then the smallest beta.
FitResult fit(const Traces& observed, const Traces& trace_source, std::size_t agent,
              const FitOptions& options);
// Observed rewards double as the trace source.
FitResult fit(const Traces& rewards, std::size_t agent, const FitOptions& options);

// Same objective restricted to t in [start, start + length), for each window
// start = 0, stride, 2*stride, ... that fits in the series.
std::vector<FitResult> fit_windows(const Traces& observed, const Traces& trace_source, std::size_t agent,
                                   const FitOptions& options, std::size_t length, std::size_t stride);

void validate(const Traces& traces);

namespace kernels {

// Sum of squared errors for every grid point, alpha-major. The serial and
// parallel versions evaluate each point with the same loop and return
// bit-identical results.
std::vector<double> grid_sse_serial(std::span<const double> observed, std::span<const double> base,
                                    std::span<const double> disadvantage, std::span<const double> advantage,
                                    const Grid& grid);
std::vector<double> grid_sse_parallel(std::span<const double> observed, std::span<const double> base,
                                      std::span<const double> disadvantage, std::span<const double> advantage,
                                      const Grid& grid);

}  // namespace kernels

}  // namespace aiecon::iafit
