// cchlab: steady states, spectra, continuation and trajectories of the
// convective Cahn-Hilliard equation.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cchlab/acceptance.hpp"
#include "cchlab/continuation.hpp"
#include "cchlab/errors.hpp"
#include "cchlab/evolution.hpp"
#include "cchlab/harness.hpp"
#include "cchlab/linearization.hpp"
#include "cchlab/phase_plane.hpp"
#include "cchlab/profile_io.hpp"

namespace fs = std::filesystem;
using namespace cch;

namespace {

struct SteadyArgs {
  double L = 10.0;
  int N = 0;
  std::string out;
};

struct SpectrumArgs {
  std::string profile;
  double delta = 0.0;
  double zero_tol = 0.0;
  bool polish = false;
  std::string out;
};

struct ContinueArgs {
  std::string profile;
  double L = 0.0;
  int N = 0;
  int family = 1;
  double delta = 0.05;
  int steps = 4;
  std::string out;
};

struct EvolveArgs {
  double L = 10.0;
  int N = 0;
  double delta = 0.0;
  double T = 100.0;
  double dt = 0.0;
  std::uint64_t seed = 0;
  std::string init;
  int stride = 100;
  int snapshot_stride = 0;
  int steps = 4;
  OmegaTolerances tol;
  std::string out;
};

struct SweepArgs {
  std::string L = "10";
  std::string delta = "0";
  std::string seeds = "0";
  int N = 0;
  double dt = 0.0;
  double T = 200.0;
  int stride = 100;
  int steps = 4;
  int workers = 0;
  OmegaTolerances tol;
  std::string out;
};

fs::path out_or(const std::string& out, const std::string& fallback) {
  return out.empty() ? default_output_root() / fallback : fs::path(out);
}

void warn_degenerate(double L) {
  if (degenerate_length(L)) fmt::print(stderr, "warning: L = {} is a multiple of 2 pi; results are not covered by theory\n", L);
}

int run_steady(const SteadyArgs& a) {
  warn_degenerate(a.L);
  const int N = a.N > 0 ? a.N : default_points(a.L);
  const auto fams = enumerate_families(a.L, N);
  const fs::path dir = out_or(a.out, fmt::format("steady_L{:.6g}", a.L));
  nlohmann::json index;
  index["L"] = a.L;
  index["N"] = N;
  index["degenerate"] = fams.degenerate;
  index["min_g1"] = fams.min_g1;
  index["families"] = nlohmann::json::array();
  for (const auto& p : fams.profiles) {
    const std::string file = fmt::format("family_{}.csv", p.family_id);
    write_profile_csv(dir / file, p);
    const double res = steady_residual(p.field);
    const double refl = reflection_error(p.field);
    index["families"].push_back({{"id", p.family_id},
                                 {"file", file},
                                 {"c1", p.c.c1},
                                 {"c2", p.c.c2},
                                 {"k", p.k},
                                 {"residual", res},
                                 {"mean", p.field.mean()},
                                 {"reflection_error", refl},
                                 {"max_abs", max_abs(p.field)}});
    fmt::print("family {:>2}  k={}  c1={:+.12e}  c2={:+.12e}  residual={:.2e}  reflection={:.2e}\n", p.family_id, p.k,
               p.c.c1, p.c.c2, res, refl);
  }
  write_text_file(dir / "families.json", index.dump(2) + "\n");
  fmt::print("{} families written to {}\n", fams.profiles.size(), dir.string());
  return 0;
}

int run_spectrum(const SpectrumArgs& a) {
  const auto prof = read_profile_csv(a.profile);
  Field u = prof.field;
  if (a.polish && max_abs(u) > 0.0) u = solve_steady(u, a.delta, {.pin = PinKind::Phase}).u;
  auto rep = spectrum(assemble(u, a.delta), u, a.zero_tol);
  rep.family_id = prof.family_id;
  const auto rc = realness_check(rep);
  const std::string json = to_json(rep);
  if (a.out.empty()) {
    std::cout << json << "\n";
  } else {
    write_text_file(a.out, json + "\n");
  }
  fmt::print(stderr, "kernel_dim={} alignment={:.12f} n_unstable={} gap={:.6e} max|Im|={:.2e}\n", rep.kernel_dim,
             rep.kernel_alignment, rep.n_unstable, rep.spectral_gap, rc.max_imag);
  return 0;
}

Profile continuation_start(const ContinueArgs& a) {
  if (!a.profile.empty()) return read_profile_csv(a.profile);
  if (!(a.L > 0.0)) throw DomainError("continue: give --profile or --L");
  const auto fams = enumerate_families(a.L, a.N > 0 ? a.N : default_points(a.L));
  for (const auto& p : fams.profiles) {
    if (p.family_id == a.family) return p;
  }
  throw DomainError(fmt::format("continue: no family {} at L={}", a.family, a.L));
}

int run_continue(const ContinueArgs& a) {
  const Profile start = continuation_start(a);
  const auto fam = continue_to(a.delta, start, a.steps);
  const fs::path base = out_or(a.out, fmt::format("continued_L{:.6g}_f{}_d{:.6g}", start.length,
                                                  start.family_id, a.delta));
  fs::path csv = base;
  csv += ".csv";
  fs::path side = base;
  side += ".json";
  write_profile_csv(csv, as_profile(fam));
  write_text_file(side, sidecar_json(fam) + "\n");
  fmt::print("delta={} residual={:.2e} newton_iters={} drift={:.2e}\n{}\n", fam.delta, fam.residual,
             fam.newton_iters, fam.drift, csv.string());
  return 0;
}

std::vector<FamilyRef> refs_at(double L, int N, double delta, int steps) {
  std::vector<FamilyRef> refs;
  for (const auto& p : enumerate_families(L, N).profiles) {
    refs.push_back({p.family_id, delta == 0.0 ? p.field : continue_to(delta, p, steps).representative});
  }
  return refs;
}

int run_evolve(const EvolveArgs& a) {
  Field u0 = Field::zero(SpectralGrid(1.0, 16));
  double L = a.L;
  if (!a.init.empty()) {
    const auto p = read_profile_csv(a.init);
    u0 = p.field.without_mean();
    L = p.length;
  } else {
    u0 = random_initial_state(SpectralGrid(L, a.N > 0 ? a.N : default_points(L)), a.seed);
  }
  warn_degenerate(L);
  const auto& g = u0.grid();
  const double dt = a.dt > 0.0 ? a.dt : default_dt(g);
  EvolveOptions opts;
  opts.stride = a.stride;
  opts.snapshot_stride = a.snapshot_stride;
  const fs::path dir = out_or(a.out, fmt::format("run_L{:.6g}_d{:.6g}_s{}", L, a.delta, a.seed));
  const RunMeta meta{L, g.points(), a.delta, dt, a.T, a.seed, a.tol};
  try {
    const auto rec = evolve(u0, a.delta, a.T, dt, opts);
    const auto v = classify_omega(rec, refs_at(L, g.points(), a.delta, a.steps), a.tol);
    write_run_directory(dir, rec, meta, &v);
    fmt::print("{} family={} distance={:.3e} velocity={:.3e} t={}\n{}\n", to_string(v.status), v.family_id,
               v.distance, v.final_velocity, v.final_time, dir.string());
  } catch (const BlowUpError& e) {
    write_run_directory(dir, e.partial(), meta);
    fmt::print(stderr, "{}\n", e.what());
    return 3;
  }
  return 0;
}

int run_sweep_cmd(const SweepArgs& a) {
  ExperimentConfig c;
  c.lengths = parse_real_list(a.L);
  c.deltas = parse_real_list(a.delta);
  c.seeds = parse_seed_list(a.seeds);
  c.points = a.N;
  c.dt = a.dt;
  c.T = a.T;
  c.stride = a.stride;
  c.continuation_steps = a.steps;
  c.workers = a.workers;
  c.tol = a.tol;
  c.output_dir = out_or(a.out, "sweep");
  for (double L : c.lengths) warn_degenerate(L);
  const auto m = run_sweep(c);
  for (const auto& cell : m.cells) {
    fmt::print("L={:<8.6g} delta={:<8.6g} seed={:<4} {:<18} family={:<3} distance={:.2e}{}\n", cell.length,
               cell.delta, cell.seed, cell.status, cell.family_id, cell.distance,
               cell.degenerate_length ? "  degenerate-L" : "");
  }
  fmt::print("{} cells, manifest in {}\n", m.cells.size(), c.output_dir.string());
  return m.complete ? 0 : 2;
}

int run_verify(const std::vector<int>& ids) {
  std::vector<int> todo = ids;
  if (todo.empty()) {
    for (int i = 1; i <= criterion_count(); ++i) todo.push_back(i);
  }
  int failed = 0;
  for (int id : todo) {
    const auto r = run_criterion(id);
    fmt::print("{}\n", format_result(r));
    std::fflush(stdout);
    failed += !r.passed;
  }
  fmt::print("{} of {} criteria passed\n", todo.size() - failed, todo.size());
  return failed == 0 ? 0 : 1;
}

void add_tolerances(CLI::App* sub, OmegaTolerances& tol) {
  sub->add_option("--distance-tol", tol.distance, "H2 shift-distance tolerance")->capture_default_str();
  sub->add_option("--velocity-tol", tol.velocity, "L2 velocity tolerance")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"convective Cahn-Hilliard laboratory"};
  app.set_config("--config", "", "key = value config file; flags override it");
  app.require_subcommand(1);

  SteadyArgs steady;
  auto* s = app.add_subcommand("steady", "enumerate equilibrium families at L");
  s->add_option("--L", steady.L, "period")->required();
  s->add_option("--N", steady.N, "grid points (default by L)");
  s->add_option("--out", steady.out, "output directory");

  SpectrumArgs spec;
  auto* sp = app.add_subcommand("spectrum", "linearization spectrum of a profile");
  sp->add_option("--profile", spec.profile, "profile CSV")->required()->check(CLI::ExistingFile);
  sp->add_option("--delta", spec.delta, "convection strength")->capture_default_str();
  sp->add_option("--zero-tol", spec.zero_tol, "kernel tolerance (default by grid)");
  sp->add_flag("--polish", spec.polish, "Newton-polish the profile first");
  sp->add_option("--out", spec.out, "report JSON (default stdout)");

  ContinueArgs cont;
  auto* c = app.add_subcommand("continue", "continue a family in delta");
  c->add_option("--profile", cont.profile, "profile CSV")->check(CLI::ExistingFile);
  c->add_option("--L", cont.L, "period, when no profile is given");
  c->add_option("--N", cont.N, "grid points");
  c->add_option("--family", cont.family, "family id at L")->capture_default_str();
  c->add_option("--delta", cont.delta, "target delta")->capture_default_str();
  c->add_option("--steps", cont.steps, "continuation steps")->capture_default_str();
  c->add_option("--out", cont.out, "output path without extension");

  EvolveArgs ev;
  auto* e = app.add_subcommand("evolve", "integrate one trajectory and classify it");
  e->add_option("--L", ev.L, "period")->capture_default_str();
  e->add_option("--N", ev.N, "grid points");
  e->add_option("--delta", ev.delta, "convection strength")->capture_default_str();
  e->add_option("--T", ev.T, "final time")->capture_default_str();
  e->add_option("--dt", ev.dt, "time step (default 0.1 h^2)");
  e->add_option("--seed", ev.seed, "random initial state seed")->capture_default_str();
  e->add_option("--init", ev.init, "initial profile CSV")->check(CLI::ExistingFile);
  e->add_option("--stride", ev.stride, "steps between records")->capture_default_str();
  e->add_option("--snapshot-stride", ev.snapshot_stride, "records between snapshots");
  e->add_option("--steps", ev.steps, "continuation steps for the reference families")->capture_default_str();
  add_tolerances(e, ev.tol);
  e->add_option("--out", ev.out, "run directory");

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "grid of trajectories over L, delta and seeds");
  w->add_option("--L", sw.L, "list, e.g. 10,12 or 8:12:5 or 4pi")->capture_default_str();
  w->add_option("--delta", sw.delta, "list")->capture_default_str();
  w->add_option("--seeds", sw.seeds, "list, e.g. 0..4")->capture_default_str();
  w->add_option("--N", sw.N, "grid points");
  w->add_option("--dt", sw.dt, "time step (default 0.1 h^2)");
  w->add_option("--T", sw.T, "final time")->capture_default_str();
  w->add_option("--stride", sw.stride, "steps between records")->capture_default_str();
  w->add_option("--steps", sw.steps, "continuation steps")->capture_default_str();
  w->add_option("--workers", sw.workers, "worker threads (default all cores)");
  add_tolerances(w, sw.tol);
  w->add_option("--out", sw.out, "sweep directory");

  std::vector<int> ids;
  auto* v = app.add_subcommand("verify", "run the acceptance criteria");
  v->add_option("ids", ids, "criteria to run (default all)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*s) return run_steady(steady);
    if (*sp) return run_spectrum(spec);
    if (*c) return run_continue(cont);
    if (*e) return run_evolve(ev);
    if (*w) return run_sweep_cmd(sw);
    if (*v) return run_verify(ids);
  } catch (const std::exception& ex) {
    fmt::print(stderr, "error: {}\n", ex.what());
    return 1;
  }
  return 0;
}
