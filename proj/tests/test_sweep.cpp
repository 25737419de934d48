#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aiecon/sweep.hpp"

using namespace aiecon;
namespace fs = std::filesystem;

namespace {

Manifest grid(int horizon) {
  const auto kvs = parse_key_values(
      "experiment = \"t\"\n"
      "variants = [communication, teaching]\n"
      "systems = [full_libertarian, semi_libertarian_utilitarian, full_utilitarian]\n"
      "objectives = [inverse_income, eq_times_prod]\n"
      "master_seed = 2024\n"
      "override.horizon = " + std::to_string(horizon) + "\n");
  return parse_manifest(kvs, fs::current_path());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(Sweep, ExpandsFullGrid) {
  const auto runs = expand(grid(100));
  ASSERT_EQ(runs.size(), 12u);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    EXPECT_EQ(runs[i].index, static_cast<int>(i));
    EXPECT_EQ(runs[i].seed, split_seed(2024, i));
    EXPECT_EQ(runs[i].config.horizon, 100);
  }
  EXPECT_EQ(runs[0].config.variant, Variant::Communication);
  EXPECT_EQ(runs[11].config.variant, Variant::Teaching);
}

TEST(Sweep, ExplicitSeedsRepeatPerCondition) {
  auto m = grid(100);
  m.replicates = 2;
  m.seeds = {7, 8};
  const auto runs = expand(m);
  ASSERT_EQ(runs.size(), 24u);
  for (const auto& r : runs) EXPECT_EQ(r.seed, r.replicate == 0 ? 7u : 8u);
}

TEST(Sweep, EmptyManifestHasNoRuns) {
  const auto m = parse_manifest({}, fs::current_path());
  EXPECT_TRUE(m.empty);
  EXPECT_TRUE(expand(m).empty());
}

TEST(Sweep, UnknownKeyRejected) {
  EXPECT_THROW(parse_manifest(parse_key_values("colour = red\n"), fs::current_path()), ConfigError);
}

TEST(Sweep, OutputIndependentOfJobs) {
  const auto m = grid(200);
  const auto serial = run_sweep_serial(m);
  const auto parallel = run_sweep_parallel(m, 4);
  const fs::path a = fs::temp_directory_path() / "aiecon_sweep_a";
  const fs::path b = fs::temp_directory_path() / "aiecon_sweep_b";
  fs::remove_all(a);
  fs::remove_all(b);
  write_sweep_outputs(serial, m, a);
  write_sweep_outputs(parallel, m, b);
  for (const char* f : {"runs.csv", "summary.csv", "correlations.csv", "ia_fits.csv", "manifest.json"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_FALSE(slurp(a / f).empty()) << f;
  }
  for (const auto& r : serial) EXPECT_TRUE(r.ok) << r.error;
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Sweep, AtomicWriteLeavesNoTemporary) {
  const fs::path dir = fs::temp_directory_path() / "aiecon_atomic";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_atomic(dir / "x.txt", "hello\n");
  EXPECT_EQ(slurp(dir / "x.txt"), "hello\n");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  fs::remove_all(dir);
}
