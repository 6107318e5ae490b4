#include "cchlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cchlab/continuation.hpp"
#include "cchlab/errors.hpp"
#include "cchlab/phase_plane.hpp"
#include "cchlab/profile_io.hpp"

namespace cch {

std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("CCHLAB_OUTPUT_ROOT"); env != nullptr && *env != '\0') return env;
  return "cchlab_out";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_real(const std::string& token) {
  std::string t = token;
  double scale = 1.0;
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    t = trim(t.substr(0, t.size() - 2));
    if (!t.empty() && t.back() == '*') t.pop_back();
    scale = std::numbers::pi;
    if (t.empty()) return scale;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw DomainError(fmt::format("not a number: '{}'", token));
  }
  if (used != t.size()) throw DomainError(fmt::format("not a number: '{}'", token));
  return v * scale;
}

std::uint64_t parse_seed(const std::string& token) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (!token.empty() && token[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(token, &used);
  } catch (const std::exception&) {
    throw DomainError(fmt::format("not a seed: '{}'", token));
  }
  if (used != token.size()) throw DomainError(fmt::format("not a seed: '{}'", token));
  return v;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_real(item));
    } else if (parts.size() == 3) {
      const double a = parse_real(parts[0]);
      const double b = parse_real(parts[1]);
      const auto n = parse_seed(parts[2]);
      if (n < 1) throw DomainError(fmt::format("empty range '{}'", item));
      if (n == 1) {
        out.push_back(a);
        continue;
      }
      for (std::uint64_t i = 0; i < n; ++i) out.push_back(a + (b - a) * static_cast<double>(i) / (n - 1));
    } else {
      throw DomainError(fmt::format("bad list entry '{}'", item));
    }
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  if (trim(text).empty()) return out;
  for (const auto& item : split(text, ',')) {
    const auto pos = item.find("..");
    if (pos == std::string::npos) {
      out.push_back(parse_seed(item));
      continue;
    }
    const auto a = parse_seed(trim(item.substr(0, pos)));
    const auto b = parse_seed(trim(item.substr(pos + 2)));
    if (b < a) throw DomainError(fmt::format("empty seed range '{}'", item));
    for (auto s = a; s <= b; ++s) out.push_back(s);
  }
  return out;
}

void ExperimentConfig::validate() const {
  for (double L : lengths) {
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError(fmt::format("config: L must be positive, got {}", L));
  }
  for (double d : deltas) {
    if (!std::isfinite(d) || d < 0.0) throw DomainError(fmt::format("config: delta must be >= 0, got {}", d));
  }
  if (points != 0 && (points < 8 || points % 2 != 0)) throw DomainError("config: N must be even and >= 8");
  if (!(T > 0.0)) throw DomainError("config: T must be positive");
  if (dt < 0.0) throw DomainError("config: dt must be positive or 0 for auto");
  if (stride < 1) throw DomainError("config: stride must be positive");
  if (continuation_steps < 1) throw DomainError("config: continuation steps must be positive");
  if (output_dir.empty()) throw DomainError("config: output_dir is empty");
}

bool degenerate_length(double length) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double k = std::round(length / two_pi);
  return k >= 1.0 && std::abs(length - k * two_pi) < kDegenerateTol;
}

namespace {

struct FamilySet {
  std::vector<FamilyRef> refs;
  std::string error;
};

struct CellSpec {
  std::size_t il, id;
  std::uint64_t seed;
};

std::string cell_name(double L, double delta, std::uint64_t seed) {
  return fmt::format("L{:.6g}_d{:.6g}_s{}", L, delta, seed);
}

int grid_points(const ExperimentConfig& c, double L) { return c.points > 0 ? c.points : default_points(L); }

}  // namespace

SweepManifest run_sweep(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  // Families per (L, delta), shared read-only by the cells.
  std::map<std::pair<std::size_t, std::size_t>, FamilySet> families;
  const PhaseScan scan = config.lengths.empty() ? PhaseScan{} : scan_phase_region();
  for (std::size_t il = 0; il < config.lengths.size(); ++il) {
    const double L = config.lengths[il];
    FamilyList base;
    std::string base_error;
    try {
      base = enumerate_families(L, grid_points(config, L), scan);
    } catch (const std::exception& e) {
      base_error = e.what();
    }
    for (std::size_t id = 0; id < config.deltas.size(); ++id) {
      auto& set = families[{il, id}];
      set.error = base_error;
      if (!base_error.empty()) continue;
      try {
        for (const auto& p : base.profiles) {
          if (config.deltas[id] == 0.0) {
            set.refs.push_back({p.family_id, p.field});
          } else {
            auto fam = continue_to(config.deltas[id], p, config.continuation_steps);
            set.refs.push_back({p.family_id, fam.representative});
          }
        }
      } catch (const std::exception& e) {
        set.error = e.what();
        set.refs.clear();
      }
    }
  }

  std::vector<CellSpec> specs;
  for (std::size_t il = 0; il < config.lengths.size(); ++il) {
    for (std::size_t id = 0; id < config.deltas.size(); ++id) {
      for (auto seed : config.seeds) specs.push_back({il, id, seed});
    }
  }

  SweepManifest manifest;
  manifest.cells.resize(specs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      const auto& s = specs[i];
      CellResult& r = manifest.cells[i];
      r.length = config.lengths[s.il];
      r.delta = config.deltas[s.id];
      r.seed = s.seed;
      r.points = grid_points(config, r.length);
      r.degenerate_length = degenerate_length(r.length);
      r.run_dir = config.output_dir / cell_name(r.length, r.delta, s.seed);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const SpectralGrid grid(r.length, r.points);
        r.dt = config.dt > 0.0 ? config.dt : default_dt(grid);
        const auto& fams = families.at({s.il, s.id});
        if (!fams.error.empty()) throw std::runtime_error("families: " + fams.error);
        const RunMeta meta{r.length, r.points, r.delta, r.dt, config.T, s.seed, config.tol};
        try {
          EvolveOptions opts;
          opts.stride = config.stride;
          const auto rec = evolve(random_initial_state(grid, s.seed), r.delta, config.T, r.dt, opts);
          const auto v = classify_omega(rec, fams.refs, config.tol);
          write_run_directory(r.run_dir, rec, meta, &v);
          r.status = to_string(v.status);
          r.family_id = v.family_id;
          r.distance = v.distance;
          r.final_velocity = v.final_velocity;
          r.final_time = v.final_time;
        } catch (const BlowUpError& e) {
          write_run_directory(r.run_dir, e.partial(), meta);
          r.status = "BlowUp";
          r.final_time = e.time();
          r.message = e.what();
        }
      } catch (const std::exception& e) {
        r.status = "Failed";
        r.message = e.what();
      }
      r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  int workers = config.workers > 0 ? config.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max<int>(1, static_cast<int>(specs.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }

  for (const auto& c : manifest.cells) {
    if (c.status == "Failed") manifest.complete = false;
  }
  write_text_file(config.output_dir / "summary.csv", summary_csv(manifest));
  write_text_file(config.output_dir / "manifest.json", manifest_json(manifest, config));
  return manifest;
}

std::string summary_csv(const SweepManifest& manifest) {
  std::string out = "L,delta,seed,N,dt,status,family_id,distance,final_velocity,final_time,degenerate_L\n";
  for (const auto& c : manifest.cells) {
    out += fmt::format("{:.17g},{:.17g},{},{},{:.17g},{},{},{:.17g},{:.17g},{:.17g},{}\n", c.length, c.delta, c.seed,
                       c.points, c.dt, c.status, c.family_id, c.distance, c.final_velocity, c.final_time,
                       c.degenerate_length ? 1 : 0);
  }
  return out;
}

std::string manifest_json(const SweepManifest& manifest, const ExperimentConfig& config) {
  nlohmann::json j;
  j["complete"] = manifest.complete;
  j["config"] = {{"L", config.lengths},
                 {"delta", config.deltas},
                 {"N", config.points},
                 {"dt", config.dt},
                 {"T", config.T},
                 {"seeds", config.seeds},
                 {"tolerances", {{"distance", config.tol.distance}, {"velocity", config.tol.velocity}}},
                 {"continuation_steps", config.continuation_steps}};
  j["cells"] = nlohmann::json::array();
  for (const auto& c : manifest.cells) {
    nlohmann::json cell = {{"L", c.length},
                           {"delta", c.delta},
                           {"seed", c.seed},
                           {"N", c.points},
                           {"dt", c.dt},
                           {"status", c.status},
                           {"family_id", c.family_id},
                           {"distance", c.distance},
                           {"final_velocity", c.final_velocity},
                           {"final_time", c.final_time},
                           {"wall_time", c.wall_time},
                           {"degenerate_L", c.degenerate_length},
                           {"run_dir", c.run_dir.filename().string()}};
    if (!c.message.empty()) cell["message"] = c.message;
    j["cells"].push_back(std::move(cell));
  }
  return j.dump(2) + "\n";
}

}  // namespace cch
