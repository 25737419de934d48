#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aiecon/config.hpp"
#include "aiecon/iafit.hpp"
#include "aiecon/metrics.hpp"

namespace aiecon {

// Experiment grid: every variant x system x objective, replicated. Lists
// absent from the manifest default to the base config's single value.
struct Manifest {
  std::string experiment = "sweep";
  EpisodeConfig base;
  std::vector<Variant> variants;
  std::vector<GoverningSystem> systems;
  std::vector<PlannerObjective> objectives;
  std::uint64_t master_seed = 1;
  int replicates = 1;
  std::vector<std::uint64_t> seeds;  // explicit per-replicate seeds; overrides master_seed
  bool write_logs = false;
  iafit::FitOptions fit;
  bool empty = false;  // no settings at all
};

// Keys: experiment, config (path, relative to the manifest), variants,
// systems, objectives, master_seed, replicates, seeds, write_logs,
// fit.gamma, fit.lambda, and override.<config key>.
Manifest parse_manifest(const std::vector<KeyValue>& kvs, const std::filesystem::path& base_dir);
Manifest load_manifest(const std::filesystem::path& path);

struct RunSpec {
  int index = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  EpisodeConfig config;
  std::string digest;
};

// Run i gets seed split_seed(master_seed, i) unless explicit seeds are given,
// in which case replicate r of every condition uses seeds[r].
std::vector<RunSpec> expand(const Manifest& m);

struct RunOutcome {
  RunSpec spec;
  bool ok = false;
  std::string error;
  metrics::Snapshot final;
  double alignment = 0.0;
  std::vector<double> alignment_series;
  std::vector<metrics::Snapshot> metric_series;
  std::vector<iafit::FitResult> fits;
  long masked_replacements = 0;
  std::string log;  // JSON Lines, only when write_logs
};

RunOutcome execute(const RunSpec& spec, const Manifest& m);

// Both produce identical outcomes; the parallel one spreads runs over `jobs`
// OpenMP threads.
std::vector<RunOutcome> run_sweep_serial(const Manifest& m);
std::vector<RunOutcome> run_sweep_parallel(const Manifest& m, int jobs);

// Writes runs.csv, summary.csv, correlations.csv, ia_fits.csv,
// manifest.json and, when requested, logs/run_NNNN.jsonl.
void write_sweep_outputs(const std::vector<RunOutcome>& runs, const Manifest& m, const std::filesystem::path& out);

// Writes through a temporary sibling and renames into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace aiecon
