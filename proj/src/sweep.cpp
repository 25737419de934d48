#include "aiecon/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "aiecon/episode.hpp"

namespace aiecon {

namespace {

std::vector<std::string> list_items(const KeyValue& kv) {
  std::string v = kv.value;
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') throw ConfigError(kv.key + " must be a [list]", kv.line);
  v = v.substr(1, v.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t\"");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t\"");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::uint64_t to_u64(const KeyValue& kv, const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(kv.key + ": expected an unsigned integer, got '" + s + "'", kv.line);
  }
}

}  // namespace

Manifest parse_manifest(const std::vector<KeyValue>& kvs, const std::filesystem::path& base_dir) {
  Manifest m;
  m.empty = kvs.empty();
  std::vector<KeyValue> overrides;
  bool have_variants = false, have_systems = false, have_objectives = false;
  for (const KeyValue& kv : kvs) {
    if (kv.key == "experiment") {
      m.experiment = kv.value;
    } else if (kv.key == "config") {
      const auto path = std::filesystem::path(kv.value).is_absolute() ? std::filesystem::path(kv.value)
                                                                       : base_dir / kv.value;
      try {
        m.base = config_from_key_values(read_key_values(path.string()), m.base);
      } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what(), kv.line);
      }
    } else if (kv.key == "variants") {
      have_variants = true;
      for (const auto& s : list_items(kv)) {
        auto v = parse_variant(s);
        if (!v) throw ConfigError("unknown variant '" + s + "'", kv.line);
        m.variants.push_back(*v);
      }
    } else if (kv.key == "systems") {
      have_systems = true;
      for (const auto& s : list_items(kv)) {
        auto v = parse_governing_system(s);
        if (!v) throw ConfigError("unknown governing system '" + s + "'", kv.line);
        m.systems.push_back(*v);
      }
    } else if (kv.key == "objectives") {
      have_objectives = true;
      for (const auto& s : list_items(kv)) {
        auto v = parse_objective(s);
        if (!v) throw ConfigError("unknown objective '" + s + "'", kv.line);
        m.objectives.push_back(*v);
      }
    } else if (kv.key == "master_seed") {
      m.master_seed = to_u64(kv, kv.value);
    } else if (kv.key == "replicates") {
      m.replicates = static_cast<int>(to_u64(kv, kv.value));
    } else if (kv.key == "seeds") {
      for (const auto& s : list_items(kv)) m.seeds.push_back(to_u64(kv, s));
    } else if (kv.key == "write_logs") {
      if (kv.value != "true" && kv.value != "false") throw ConfigError("write_logs must be true or false", kv.line);
      m.write_logs = kv.value == "true";
    } else if (kv.key == "fit.gamma" || kv.key == "fit.lambda") {
      double v = 0.0;
      try {
        v = std::stod(kv.value);
      } catch (const std::exception&) {
        throw ConfigError(kv.key + ": expected a number", kv.line);
      }
      (kv.key == "fit.gamma" ? m.fit.gamma : m.fit.lambda) = v;
    } else if (kv.key.rfind("override.", 0) == 0) {
      overrides.push_back(KeyValue{kv.key.substr(9), kv.value, kv.line});
    } else {
      throw ConfigError("unknown manifest key '" + kv.key + "'", kv.line);
    }
  }
  for (const KeyValue& kv : overrides) apply_setting(m.base, kv);
  m.base.validate();
  if (!have_variants) m.variants = {m.base.variant};
  if (!have_systems) m.systems = {m.base.system};
  if (!have_objectives) m.objectives = {m.base.objective};
  if (!m.seeds.empty()) m.replicates = static_cast<int>(m.seeds.size());
  if (m.empty) m.replicates = 0;
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_key_values(path.string()), path.parent_path());
}

std::vector<RunSpec> expand(const Manifest& m) {
  std::vector<RunSpec> out;
  int index = 0;
  for (Variant v : m.variants) {
    for (GoverningSystem s : m.systems) {
      for (PlannerObjective o : m.objectives) {
        for (int r = 0; r < m.replicates; ++r) {
          RunSpec spec;
          spec.index = index;
          spec.replicate = r;
          spec.seed = m.seeds.empty() ? split_seed(m.master_seed, static_cast<std::uint64_t>(index))
                                      : m.seeds[static_cast<std::size_t>(r)];
          spec.config = m.base;
          spec.config.variant = v;
          spec.config.system = s;
          spec.config.objective = o;
          spec.config.seed = spec.seed;
          spec.config.validate();
          spec.digest = config_digest(spec.config);
          out.push_back(std::move(spec));
          ++index;
        }
      }
    }
  }
  return out;
}

RunOutcome execute(const RunSpec& spec, const Manifest& m) {
  RunOutcome out;
  out.spec = spec;
  try {
    const EpisodeLog log = run_episode(spec.config, spec.seed);
    out.final = log.summary.final;
    out.alignment = log.summary.alignment;
    out.masked_replacements = log.summary.masked_replacements;
    for (const StepRecord& r : log.steps) {
      out.alignment_series.push_back(r.alignment);
      out.metric_series.push_back(r.metrics);
    }
    iafit::FitOptions fit = m.fit;
    fit.parallel = false;  // runs are already spread over threads
    const auto traces = reward_traces(log);
    for (std::size_t i = 0; i < traces.size(); ++i) out.fits.push_back(iafit::fit(traces, i, fit));
    if (m.write_logs) out.log = to_jsonl(log);
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

std::vector<RunOutcome> run_sweep_serial(const Manifest& m) {
  const auto specs = expand(m);
  std::vector<RunOutcome> out;
  out.reserve(specs.size());
  for (const RunSpec& s : specs) out.push_back(execute(s, m));
  return out;
}

std::vector<RunOutcome> run_sweep_parallel(const Manifest& m, int jobs) {
  const auto specs = expand(m);
  std::vector<RunOutcome> out(specs.size());
  const auto count = static_cast<long>(specs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs < 1 ? 1 : jobs)
  for (long i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = execute(specs[static_cast<std::size_t>(i)], m);
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

namespace {

constexpr const char* kMetricNames[] = {"eq", "gini", "prod", "maximin", "swf_inverse_income", "swf_eq_times_prod"};

double metric_value(const metrics::Snapshot& s, int k) {
  switch (k) {
    case 0: return s.eq;
    case 1: return s.gini;
    case 2: return s.prod;
    case 3: return s.maximin;
    case 4: return s.swf_inverse_income;
    default: return s.swf_eq_times_prod;
  }
}

std::string condition_of(const EpisodeConfig& c) {
  return std::string(to_string(c.variant)) + "," + std::string(to_string(c.system)) + "," +
         std::string(to_string(c.objective));
}

void correlation_rows(std::ostringstream& out, const std::string& mode, const std::string& group,
                      const std::vector<double>& align, const std::vector<std::vector<double>>& metric) {
  for (int k = 0; k < 6; ++k) {
    const auto r = metrics::correlate(align, metric[static_cast<std::size_t>(k)]);
    out << mode << ',' << group << ',' << kMetricNames[k] << ',' << align.size() << ','
        << (r ? format_double(*r) : std::string()) << '\n';
  }
}

}  // namespace

void write_sweep_outputs(const std::vector<RunOutcome>& runs, const Manifest& m, const std::filesystem::path& out) {
  std::ostringstream runs_csv;
  runs_csv << "run,variant,system,objective,replicate,seed,digest,status,alignment";
  for (const char* name : kMetricNames) runs_csv << ',' << name;
  runs_csv << ",masked_replacements,error\n";
  for (const RunOutcome& r : runs) {
    runs_csv << r.spec.index << ',' << condition_of(r.spec.config) << ',' << r.spec.replicate << ',' << r.spec.seed
             << ',' << r.spec.digest << ',' << (r.ok ? "ok" : "failed") << ',';
    if (r.ok) {
      runs_csv << format_double(r.alignment);
      for (int k = 0; k < 6; ++k) runs_csv << ',' << format_double(metric_value(r.final, k));
      runs_csv << ',' << r.masked_replacements << ",\n";
    } else {
      runs_csv << ",,,,,,,,\"" << r.error << "\"\n";
    }
  }

  // Pooled per condition, in first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunOutcome*>> groups;
  for (const RunOutcome& r : runs) {
    const auto key = condition_of(r.spec.config);
    if (!groups.count(key)) order.push_back(key);
    groups[key].push_back(&r);
  }
  std::ostringstream summary;
  summary << "variant,system,objective,runs,failed,mean_alignment";
  for (const char* name : kMetricNames) summary << ",mean_" << name;
  summary << '\n';
  for (const auto& key : order) {
    int ok = 0, failed = 0;
    double align = 0.0;
    std::array<double, 6> sums{};
    for (const RunOutcome* r : groups[key]) {
      if (!r->ok) {
        ++failed;
        continue;
      }
      ++ok;
      align += r->alignment;
      for (int k = 0; k < 6; ++k) sums[static_cast<std::size_t>(k)] += metric_value(r->final, k);
    }
    summary << key << ',' << ok + failed << ',' << failed << ',' << (ok ? format_double(align / ok) : "");
    for (double s : sums) summary << ',' << (ok ? format_double(s / ok) : "");
    summary << '\n';
  }

  // Alignment against each metric: per-run endpoints and pooled per-step series.
  std::ostringstream corr;
  corr << "mode,group,metric,n,r\n";
  const auto emit = [&](const std::string& group, const std::vector<const RunOutcome*>& members) {
    std::vector<double> end_align, step_align;
    std::vector<std::vector<double>> end_metric(6), step_metric(6);
    for (const RunOutcome* r : members) {
      if (!r->ok) continue;
      end_align.push_back(r->alignment);
      for (int k = 0; k < 6; ++k) end_metric[static_cast<std::size_t>(k)].push_back(metric_value(r->final, k));
      step_align.insert(step_align.end(), r->alignment_series.begin(), r->alignment_series.end());
      for (const auto& s : r->metric_series) {
        for (int k = 0; k < 6; ++k) step_metric[static_cast<std::size_t>(k)].push_back(metric_value(s, k));
      }
    }
    correlation_rows(corr, "endpoint", group, end_align, end_metric);
    correlation_rows(corr, "per_step", group, step_align, step_metric);
  };
  std::vector<const RunOutcome*> all;
  for (const RunOutcome& r : runs) all.push_back(&r);
  emit("all", all);
  for (const auto& key : order) {
    std::string g = key;
    std::replace(g.begin(), g.end(), ',', '/');
    emit(g, groups[key]);
  }

  std::ostringstream fits;
  fits << "run,agent,alpha,beta,residual,flag\n";
  for (const RunOutcome& r : runs) {
    for (const auto& f : r.fits) {
      fits << r.spec.index << ',' << f.agent << ',' << format_double(f.alpha) << ',' << format_double(f.beta) << ','
           << format_double(f.residual) << ',' << f.flag() << '\n';
    }
  }

  nlohmann::json manifest{{"experiment", m.experiment},
                          {"seed_rule", m.seeds.empty() ? "split_seed(master_seed, run_index)" : "seeds[replicate]"},
                          {"master_seed", m.master_seed},
                          {"fit", {{"gamma", m.fit.gamma}, {"lambda", m.fit.lambda}}}};
  nlohmann::json list = nlohmann::json::array();
  for (const RunOutcome& r : runs) {
    list.push_back({{"run", r.spec.index},
                    {"variant", std::string(to_string(r.spec.config.variant))},
                    {"system", std::string(to_string(r.spec.config.system))},
                    {"objective", std::string(to_string(r.spec.config.objective))},
                    {"replicate", r.spec.replicate},
                    {"seed", r.spec.seed},
                    {"digest", r.spec.digest},
                    {"status", r.ok ? "ok" : "failed"}});
  }
  manifest["runs"] = list;

  std::filesystem::create_directories(out);
  write_atomic(out / "runs.csv", runs_csv.str());
  write_atomic(out / "summary.csv", summary.str());
  write_atomic(out / "correlations.csv", corr.str());
  write_atomic(out / "ia_fits.csv", fits.str());
  write_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  if (m.write_logs) {
    for (const RunOutcome& r : runs) {
      if (!r.ok) continue;
      char name[32];
      std::snprintf(name, sizeof(name), "run_%04d.jsonl", r.spec.index);
      write_atomic(out / "logs" / name, r.log);
    }
  }
}

}  // namespace aiecon
