#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cchlab/errors.hpp"
#include "cchlab/harness.hpp"
#include "cchlab/profile_io.hpp"

using namespace cch;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(const fs::path& dir) {
  ExperimentConfig c;
  c.lengths = {10.0, 4 * std::numbers::pi};
  c.deltas = {0.0, 0.05};
  c.seeds = {0, 1};
  c.points = 64;
  c.dt = 1e-3;
  c.T = 0.2;
  c.stride = 50;
  c.workers = 2;
  c.output_dir = dir;
  return c;
}

}  // namespace

TEST(Lists, Reals) {
  EXPECT_EQ(parse_real_list("0,0.025,0.05"), (std::vector<double>{0, 0.025, 0.05}));
  EXPECT_EQ(parse_real_list("1:3:3"), (std::vector<double>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(parse_real_list("4pi").at(0), 4 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(parse_real_list("pi").at(0), std::numbers::pi);
  EXPECT_TRUE(parse_real_list("").empty());
  EXPECT_THROW(parse_real_list("1,x"), DomainError);
  EXPECT_THROW(parse_real_list("1:2"), DomainError);
}

TEST(Lists, Seeds) {
  EXPECT_EQ(parse_seed_list("0..4"), (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(parse_seed_list("3,7,1..2"), (std::vector<std::uint64_t>{3, 7, 1, 2}));
  EXPECT_THROW(parse_seed_list("4..1"), DomainError);
  EXPECT_THROW(parse_seed_list("-1"), DomainError);
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.output_dir = "x";
  EXPECT_NO_THROW(c.validate());
  c.lengths = {-1.0};
  EXPECT_THROW(c.validate(), DomainError);
  c.lengths = {10.0};
  c.points = 33;
  EXPECT_THROW(c.validate(), DomainError);
  c.points = 0;
  c.T = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c.T = 1;
  c.output_dir.clear();
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(OutputRoot, FromEnvironment) {
  setenv("CCHLAB_OUTPUT_ROOT", "/tmp/somewhere", 1);
  EXPECT_EQ(default_output_root(), fs::path("/tmp/somewhere"));
  unsetenv("CCHLAB_OUTPUT_ROOT");
  EXPECT_EQ(default_output_root(), fs::path("cchlab_out"));
}

TEST(Sweep, EmptyGrid) {
  const auto dir = fs::temp_directory_path() / "cchlab_sweep_empty";
  fs::remove_all(dir);
  auto c = small_config(dir);
  c.seeds.clear();
  const auto m = run_sweep(c);
  EXPECT_TRUE(m.cells.empty());
  EXPECT_TRUE(m.complete);
  const auto j = nlohmann::json::parse(read_text_file(dir / "manifest.json"));
  EXPECT_TRUE(j["cells"].empty());
  fs::remove_all(dir);
}

TEST(Sweep, DeterministicCompleteAndFlagged) {
  const auto a = fs::temp_directory_path() / "cchlab_sweep_a";
  const auto b = fs::temp_directory_path() / "cchlab_sweep_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const auto ma = run_sweep(small_config(a));
  auto cb = small_config(b);
  cb.workers = 1;
  run_sweep(cb);
  EXPECT_EQ(read_text_file(a / "summary.csv"), read_text_file(b / "summary.csv"));

  ASSERT_EQ(ma.cells.size(), 8u);
  EXPECT_TRUE(ma.complete);
  for (const auto& c : ma.cells) {
    EXPECT_FALSE(c.status.empty());
    EXPECT_NE(c.status, "Failed") << c.message;
    EXPECT_TRUE(fs::exists(c.run_dir / "meta.json"));
    EXPECT_EQ(c.degenerate_length, std::abs(c.length - 4 * std::numbers::pi) < 1e-9);
  }
  const auto j = nlohmann::json::parse(read_text_file(a / "manifest.json"));
  EXPECT_EQ(j["cells"].size(), 8u);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Sweep, DegenerateDetection) {
  EXPECT_TRUE(degenerate_length(2 * std::numbers::pi));
  EXPECT_TRUE(degenerate_length(4 * std::numbers::pi));
  EXPECT_FALSE(degenerate_length(10.0));
  EXPECT_FALSE(degenerate_length(1.0));
}
