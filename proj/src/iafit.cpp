#include "aiecon/iafit.hpp"

#include <algorithm>
#include <stdexcept>

namespace aiecon::iafit {

Series smooth(std::span<const double> rewards, double gamma, double lambda) {
  Series e(rewards.size());
  if (rewards.empty()) return e;
  const double decay = gamma * lambda;
  e[0] = rewards[0];
  for (std::size_t t = 1; t < rewards.size(); ++t) e[t] = decay * e[t - 1] + rewards[t];
  return e;
}

Traces smooth(const Traces& rewards, double gamma, double lambda) {
  Traces out;
  out.reserve(rewards.size());
  for (const Series& r : rewards) out.push_back(smooth(r, gamma, lambda));
  return out;
}

void validate(const Traces& traces) {
  if (traces.size() < 2) throw std::invalid_argument("inequity fitting needs at least two agents");
  const std::size_t len = traces.front().size();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (traces[i].size() != len) {
      throw std::invalid_argument("reward series of agent " + std::to_string(i) + " has length " +
                                  std::to_string(traces[i].size()) + ", expected " + std::to_string(len));
    }
  }
}

Regressors inequity_regressors(const Traces& smoothed, std::size_t agent) {
  validate(smoothed);
  const std::size_t n = smoothed.size();
  const std::size_t len = smoothed.front().size();
  const double scale = 1.0 / static_cast<double>(n - 1);
  Regressors r{Series(len, 0.0), Series(len, 0.0)};
  for (std::size_t t = 0; t < len; ++t) {
    const double self = smoothed[agent][t];
    double dis = 0.0;
    double adv = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == agent) continue;
      dis += std::max(smoothed[j][t] - self, 0.0);
      adv += std::max(self - smoothed[j][t], 0.0);
    }
    r.disadvantage[t] = scale * dis;
    r.advantage[t] = scale * adv;
  }
  return r;
}

Traces synth_subjective(const Traces& base, double alpha, double beta, double gamma, double lambda) {
  validate(base);
  const Traces e = smooth(base, gamma, lambda);
  Traces u = base;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Regressors r = inequity_regressors(e, i);
    for (std::size_t t = 0; t < base[i].size(); ++t) {
      u[i][t] = base[i][t] - alpha * r.disadvantage[t] - beta * r.advantage[t];
    }
  }
  return u;
}

Grid Grid::standard(bool inclusive) {
  Grid g;
  for (int k = inclusive ? 0 : 1; k <= (inclusive ? 10 : 9); ++k) g.alpha.push_back(k / 2.0);
  for (int k = inclusive ? 0 : 1; k <= (inclusive ? 10 : 9); ++k) g.beta.push_back(k / 10.0);
  return g;
}

std::string FitResult::flag() const {
  if (alpha_identifiable && beta_identifiable) return "ok";
  if (!alpha_identifiable && !beta_identifiable) return "unidentifiable";
  return alpha_identifiable ? "beta_unidentifiable" : "alpha_unidentifiable";
}

namespace {

FitResult fit_range(const Series& observed, const Series& base, const Regressors& reg, std::size_t agent,
                    const FitOptions& options, std::size_t start, std::size_t length) {
  const auto sub = [&](const Series& s) { return std::span<const double>(s).subspan(start, length); };
  const auto sse = options.parallel
                       ? kernels::grid_sse_parallel(sub(observed), sub(base), sub(reg.disadvantage),
                                                    sub(reg.advantage), options.grid)
                       : kernels::grid_sse_serial(sub(observed), sub(base), sub(reg.disadvantage),
                                                  sub(reg.advantage), options.grid);
  if (sse.empty()) throw std::invalid_argument("fit grid is empty");

  // Grid axes are scanned in ascending order so the first strict minimum
  // honours the smallest-alpha-then-beta tie rule.
  std::vector<std::size_t> ai(options.grid.alpha.size());
  std::vector<std::size_t> bi(options.grid.beta.size());
  for (std::size_t k = 0; k < ai.size(); ++k) ai[k] = k;
  for (std::size_t k = 0; k < bi.size(); ++k) bi[k] = k;
  std::stable_sort(ai.begin(), ai.end(),
                   [&](auto x, auto y) { return options.grid.alpha[x] < options.grid.alpha[y]; });
  std::stable_sort(bi.begin(), bi.end(),
                   [&](auto x, auto y) { return options.grid.beta[x] < options.grid.beta[y]; });

  FitResult best;
  best.agent = agent;
  best.window_start = start;
  best.window_length = length;
  bool first = true;
  for (std::size_t a : ai) {
    for (std::size_t b : bi) {
      const double v = sse[a * options.grid.beta.size() + b];
      if (first || v < best.residual) {
        best.residual = v;
        best.alpha = options.grid.alpha[a];
        best.beta = options.grid.beta[b];
        first = false;
      }
    }
  }
  const auto nonzero = [](std::span<const double> s) {
    return std::any_of(s.begin(), s.end(), [](double x) { return x != 0.0; });
  };
  best.alpha_identifiable = nonzero(sub(reg.disadvantage));
  best.beta_identifiable = nonzero(sub(reg.advantage));
  return best;
}

struct Prepared {
  Series base;
  Regressors reg;
};

Prepared prepare(const Traces& observed, const Traces& trace_source, std::size_t agent,
                 const FitOptions& options) {
  validate(observed);
  validate(trace_source);
  if (observed.size() != trace_source.size() || observed.front().size() != trace_source.front().size()) {
    throw std::invalid_argument("observed rewards and trace source differ in shape");
  }
  if (agent >= observed.size()) throw std::out_of_range("fit target agent out of range");
  if (observed.front().size() < 2) throw std::invalid_argument("inequity fitting needs two time steps");
  const Traces e = smooth(trace_source, options.gamma, options.lambda);
  Prepared p;
  p.reg = inequity_regressors(e, agent);
  p.base = options.base == BaseTerm::Smoothed ? e[agent] : trace_source[agent];
  return p;
}

}  // namespace

FitResult fit(const Traces& observed, const Traces& trace_source, std::size_t agent,
              const FitOptions& options) {
  const Prepared p = prepare(observed, trace_source, agent, options);
  return fit_range(observed[agent], p.base, p.reg, agent, options, 0, observed[agent].size());
}

FitResult fit(const Traces& rewards, std::size_t agent, const FitOptions& options) {
  return fit(rewards, rewards, agent, options);
}

std::vector<FitResult> fit_windows(const Traces& observed, const Traces& trace_source, std::size_t agent,
                                   const FitOptions& options, std::size_t length, std::size_t stride) {
  if (length < 2 || stride < 1) throw std::invalid_argument("window length must be >= 2 and stride >= 1");
  const Prepared p = prepare(observed, trace_source, agent, options);
  const std::size_t total = observed[agent].size();
  std::vector<FitResult> out;
  for (std::size_t start = 0; start + length <= total; start += stride) {
    out.push_back(fit_range(observed[agent], p.base, p.reg, agent, options, start, length));
  }
  return out;
}

namespace kernels {

namespace {

inline double point_sse(std::span<const double> observed, std::span<const double> base,
                        std::span<const double> dis, std::span<const double> adv, double alpha, double beta) {
  double s = 0.0;
  for (std::size_t t = 0; t < observed.size(); ++t) {
    const double err = observed[t] - (base[t] - alpha * dis[t] - beta * adv[t]);
    s += err * err;
  }
  return s;
}

void check(std::span<const double> observed, std::span<const double> base, std::span<const double> dis,
           std::span<const double> adv) {
  if (base.size() != observed.size() || dis.size() != observed.size() || adv.size() != observed.size()) {
    throw std::invalid_argument("fit kernel inputs differ in length");
  }
}

}  // namespace

std::vector<double> grid_sse_serial(std::span<const double> observed, std::span<const double> base,
                                    std::span<const double> disadvantage, std::span<const double> advantage,
                                    const Grid& grid) {
  check(observed, base, disadvantage, advantage);
  const std::size_t nb = grid.beta.size();
  std::vector<double> out(grid.alpha.size() * nb);
  for (std::size_t a = 0; a < grid.alpha.size(); ++a) {
    for (std::size_t b = 0; b < nb; ++b) {
      out[a * nb + b] = point_sse(observed, base, disadvantage, advantage, grid.alpha[a], grid.beta[b]);
    }
  }
  return out;
}

std::vector<double> grid_sse_parallel(std::span<const double> observed, std::span<const double> base,
                                      std::span<const double> disadvantage, std::span<const double> advantage,
                                      const Grid& grid) {
  check(observed, base, disadvantage, advantage);
  const std::size_t nb = grid.beta.size();
  const auto points = static_cast<long>(grid.alpha.size() * nb);
  std::vector<double> out(static_cast<std::size_t>(points));
#pragma omp parallel for schedule(static)
  for (long k = 0; k < points; ++k) {
    const auto a = static_cast<std::size_t>(k) / nb;
    const auto b = static_cast<std::size_t>(k) % nb;
    out[static_cast<std::size_t>(k)] =
        point_sse(observed, base, disadvantage, advantage, grid.alpha[a], grid.beta[b]);
  }
  return out;
}

}  // namespace kernels

}  // namespace aiecon::iafit
