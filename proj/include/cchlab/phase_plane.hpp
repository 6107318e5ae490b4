#pragma once

// Periodic orbits of u'' = W'(u) + c1 in the phase plane: the half-period and
// first-moment quadratures, the period/zero-mean system g1 = L/2, g2 = 0, and
// reconstruction of the resulting steady profiles.

#include <vector>

#include "cchlab/potential.hpp"
#include "cchlab/spectral.hpp"

namespace cch {

struct QuadratureResult {
  double g1 = 0.0;  ///< half-period
  double g2 = 0.0;  ///< first moment over the rising half-orbit
  double estimated_error = 0.0;
  bool warning = false;  ///< tolerance not met at the maximum order
  int order = 0;
};

/// g1 = int du / sqrt(P_c), g2 = int u du / sqrt(P_c) over (u_m, u_M), after
/// the substitution u = u_m cos^2 t + u_M sin^2 t. Gauss-Legendre with order
/// doubling from 16 until two orders agree to tol (relative to g1).
QuadratureResult quad_g(const PhaseParams& c, double tol = 1e-13);

struct ScanOptions {
  int n1 = 400;  ///< cells across c1 / r(c2) in (-1, 1); must be even
  int n2 = 400;  ///< cells across c2
  double c2_min = -0.249;
  double c2_max = -0.001;
  int threads = 0;  ///< 0: hardware concurrency
};

/// g1, g2 tabulated at cell centres of the normalized scan rectangle
/// (s, c2) with c1 = s r(c2). Independent of L, so one table serves all
/// sub-periods.
struct PhaseScan {
  ScanOptions options;
  std::vector<double> s;   ///< n1 centres
  std::vector<double> c2;  ///< n2 centres
  std::vector<double> g1;  ///< row-major [i2 * n1 + i1]
  std::vector<double> g2;
  std::vector<char> valid;

  double min_g1() const;
  PhaseParams params(int i1, int i2) const;
};

PhaseScan scan_phase_region(const ScanOptions& options = {});

struct SteadyParams {
  PhaseParams c;
  double g1_error = 0.0;  ///< |g1 - L/2|
  double g2_error = 0.0;  ///< |g2|
  int newton_iters = 0;
};

/// All (c1, c2) in the scan rectangle with g1 = L/2 and g2 = 0, sorted by c2
/// then c1.
std::vector<SteadyParams> find_steady_params(double length, const PhaseScan& scan);
std::vector<SteadyParams> find_steady_params(double length, const ScanOptions& options = {});

struct Profile {
  Field field;
  double length = 0.0;
  PhaseParams c = kTrivialParams;
  int k = 1;  ///< principal periods packed into [0, L)
  int family_id = 0;
  double removed_mean = 0.0;
};

/// Samples of the orbit with parameters c, principal period L / k, tiled k
/// times over N points on [0, L), positioned so u(0) = u_m. Throws
/// DomainError if g1(c) does not match L / (2k). With polish, the sampled
/// orbit is refined by Newton on the discrete steady equation, which removes
/// the transform roundoff that D^6 would otherwise amplify.
Profile reconstruct_profile(const PhaseParams& c, double length, int points, int k = 1, bool polish = true);

Profile trivial_profile(double length, int points);

/// max_j |u(x_j) - u(-x_j)| on the sample grid: reflection symmetry about x = 0.
double reflection_error(const Field& u);

inline constexpr double kDegenerateTol = 1e-6;

struct FamilyList {
  std::vector<Profile> profiles;  ///< trivial family first
  bool degenerate = false;        ///< |L - 2 k pi| < kDegenerateTol for some k
  int degenerate_k = 0;
  double min_g1 = 0.0;  ///< empirical minimum of g1 over the scan
};

/// One representative per equilibrium family: the trivial state (id 0) and,
/// for every k >= 1 with L / k > 2 pi, the reconstructed solutions of period
/// L / k tiled k times.
FamilyList enumerate_families(double length, int points, const ScanOptions& options = {});
FamilyList enumerate_families(double length, int points, const PhaseScan& scan);

}  // namespace cch
