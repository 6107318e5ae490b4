#pragma once

// Sweeps of trajectories over (L, delta, seed) grids with per-cell run
// directories, a manifest and a summary table.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cchlab/evolution.hpp"

namespace cch {

/// Directory named by CCHLAB_OUTPUT_ROOT, else ./cchlab_out.
std::filesystem::path default_output_root();

/// Comma-separated reals; an entry may carry a "pi" suffix ("4pi", "2.5pi")
/// and a range a:b:n expands to n equally spaced values including both ends.
std::vector<double> parse_real_list(const std::string& text);

/// Comma-separated seeds or inclusive ranges "a..b".
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

struct ExperimentConfig {
  std::vector<double> lengths{10.0};
  std::vector<double> deltas{0.0};
  int points = 0;    ///< 0: default_points(L)
  double dt = 0.0;   ///< 0: default_dt
  double T = 200.0;
  std::vector<std::uint64_t> seeds{0};
  OmegaTolerances tol;
  int stride = 100;
  int continuation_steps = 4;
  int workers = 0;  ///< 0: hardware concurrency
  std::filesystem::path output_dir;

  /// Throws DomainError on L <= 0, odd N, T <= 0 or an empty output_dir.
  void validate() const;
};

struct CellResult {
  double length = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  int points = 0;
  double dt = 0.0;
  std::string status;  ///< an OmegaStatus name, BlowUp or Failed
  int family_id = -1;
  double distance = 0.0;
  double final_velocity = 0.0;
  double final_time = 0.0;
  double wall_time = 0.0;
  bool degenerate_length = false;
  std::string message;
  std::filesystem::path run_dir;
};

struct SweepManifest {
  std::vector<CellResult> cells;  ///< ordered by L, then delta, then seed
  bool complete = true;           ///< false if some cell failed
};

/// True if |L - 2 k pi| < kDegenerateTol for some k >= 1.
bool degenerate_length(double length);

/// Runs every cell on a bounded pool; each cell gets
/// output_dir/L<L>_d<delta>_s<seed>. Writes manifest.json and summary.csv
/// into output_dir after all cells finish. Cell failures are recorded.
SweepManifest run_sweep(const ExperimentConfig& config);

/// Numeric columns only (no wall time), so equal configs give equal bytes.
std::string summary_csv(const SweepManifest& manifest);
std::string manifest_json(const SweepManifest& manifest, const ExperimentConfig& config);

}  // namespace cch
