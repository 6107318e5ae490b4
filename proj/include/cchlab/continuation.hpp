#pragma once

// Steady states at delta > 0 by pinned Newton continuation from delta = 0,
// and distances between shift orbits of fields.

#include <string>
#include <vector>

#include "cchlab/phase_plane.hpp"
#include "cchlab/spectral.hpp"

namespace cch {

/// G(delta, u) = delta u u_x + D^6 u - D^4 W'(u); identical to rhs(u, delta).
Field eval_G(double delta, const Field& u);

enum class PinKind {
  Point,  ///< u(0) = 0
  Phase,  ///< <u0_x, u - u0> = 0 with u0 the initial guess
};

struct SteadySolveOptions {
  PinKind pin = PinKind::Point;
  int max_iters = 30;
  double tol = 1e-11;  ///< on the L2 norm of G + c u_x
  double pin_tol = 1e-8;  ///< minimum |u_x(0)| for the point pin
};

struct SteadySolve {
  Field u;
  double drift = 0.0;     ///< c in G + c u_x = 0; nonzero means a travelling wave
  double residual = 0.0;  ///< ||G(delta, u)||_L2
  int iterations = 0;
  std::vector<double> corrections;  ///< ||du||_L2 per Newton step
  bool converged = false;
};

/// Newton on the bordered system [G(delta, u) + c u_x = 0; pin]. The mean is
/// structurally excluded. Throws ConvergenceError if tol is not reached.
SteadySolve solve_steady(const Field& guess, double delta, const SteadySolveOptions& options = {});

/// The field shifted so that u(0) = 0 at the upward zero crossing closest to
/// x = 0. Throws DomainError if u has no simple zero.
Field pin_at_zero(const Field& u);

struct ContinuedFamily {
  double delta = 0.0;
  Field representative;
  int source_family = 0;
  double residual = 0.0;
  int newton_iters = 0;
  double drift = 0.0;
  PhaseParams source_c = kTrivialParams;
  int source_k = 1;
};

struct ContinuationOptions {
  SteadySolveOptions newton;
  int slow_iters = 12;  ///< abort after two consecutive corrections slower than this
};

/// Continue from delta = 0 (or the delta held by start) to delta_target in
/// equal steps; every intermediate solution is returned, the last one at
/// delta_target. The start field must satisfy the pin.
std::vector<ContinuedFamily> continue_path(const ContinuedFamily& start, double delta_target, int steps,
                                           const ContinuationOptions& options = {});

/// Pins the profile at a zero, polishes it at delta = 0 and continues to
/// delta_target. The trivial family is returned unchanged.
ContinuedFamily continue_to(double delta_target, const Profile& u0, int steps,
                            const ContinuationOptions& options = {});

struct ShiftDistance {
  double distance = 0.0;
  double best_shift = 0.0;  ///< in [0, L), minimizer of ||u - tau_s v||
};

/// min over s of ||u - tau_s v||_{H^order}, with tau_s v(x) = v(x - s).
ShiftDistance shift_distance(const Field& u, const Field& v, int order = 2);

/// Symmetric Hausdorff distance between the shift orbits of a and b,
/// sampled at n_samples shifts of each. Checked against shift_distance.
double hausdorff_families(const Field& a, const Field& b, int n_samples = 64, int order = 2);
double hausdorff_families(const ContinuedFamily& a, const ContinuedFamily& b, int n_samples = 64, int order = 2);

/// JSON sidecar: delta, residual, newton_iters, source_family, drift.
std::string sidecar_json(const ContinuedFamily& fam);

/// Profile carrying the continued representative and its source metadata.
Profile as_profile(const ContinuedFamily& fam);

}  // namespace cch
