#pragma once

// ETDRK4 integration of u_t = (delta/2)(u^2)_x + D^6 u - D^4 (u^3 - u),
// energy tracking and omega-limit classification.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cchlab/spectral.hpp"

namespace cch {

enum class Precision {
  Double,    ///< nonlinear products in double
  Extended,  ///< nonlinear products in long double
  Auto,      ///< double until the velocity drops below switch_velocity
};

enum class Scheme {
  CoxMatthews,         ///< classical four-stage ETDRK4
  HochbruckOstermann,  ///< five-stage, fourth order also in the stiff sense
};

/// Fourth-order exponential Runge-Kutta with the linear symbol -q^6 + q^4
/// integrated exactly and N(u) = (delta/2)(u^2)_x - D^4 u^3 explicit.
class EtdRk4 {
 public:
  EtdRk4(const SpectralGrid& grid, double delta, double dt, Precision precision = Precision::Extended,
         Scheme scheme = Scheme::HochbruckOstermann);

  const SpectralGrid& grid() const { return grid_; }
  double dt() const { return dt_; }
  double delta() const { return delta_; }
  bool extended() const { return extended_; }
  void set_extended(bool on) { extended_ = on; }
  /// Drops N(u): the step becomes the exact linear propagator.
  void set_linear_only(bool on) { linear_only_ = on; }

  /// Advances the coefficients in place by one step.
  void advance(std::vector<Complex>& c) const;
  Field step(const Field& u) const;

 private:
  void nonlinear(std::span<const Complex> c, std::span<Complex> out) const;

  void advance_cox_matthews(std::vector<Complex>& c) const;
  void advance_hochbruck_ostermann(std::vector<Complex>& c) const;

  SpectralGrid grid_;
  double delta_;
  double dt_;
  bool extended_;
  bool linear_only_ = false;
  Scheme scheme_;
  std::vector<double> e_, e2_, q_, f1_, f2_, f3_;
  std::vector<double> a21_, a31_, a32_, a41_, a42_, a51_, a52_, a54_;
};

/// One ETDRK4 step in extended precision.
Field step(const Field& u, double delta, double dt);

/// Value of phi_n(z) = sum_m z^m / (m + n)!, n = 1..3.
double phi(int n, double z);

double default_dt(const SpectralGrid& grid);

struct Energies {
  double F = 0.0;   ///< 1/2 ||u_x||^2 + int W(u)
  double E1 = 0.0;  ///< F + 2 C1 ||(-D^2)^-1 u||^2, C1 = delta^2 C0
};
Energies energies(const Field& u, double delta, double c0 = 1.0);

struct EvolveOptions {
  int stride = 100;           ///< steps between records
  int snapshot_stride = 0;    ///< records between stored snapshots; 0 stores only the ends
  Precision precision = Precision::Auto;
  Scheme scheme = Scheme::HochbruckOstermann;
  double switch_velocity = 1e-5;
  double c0 = 1.0;
};

struct TrajectoryRecord {
  SpectralGrid grid{1.0, 16};
  double delta = 0.0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> F_values;
  std::vector<double> E1_values;
  std::vector<double> velocity;
  std::vector<double> mean;
  std::vector<double> h1_norm;
  std::vector<double> snapshot_times;
  std::vector<Field> snapshots;
  double mean_drift = 0.0;  ///< max |mean| over records
  double extended_from = -1.0;  ///< time extended precision took over; -1 if never

  const Field& final_state() const { return snapshots.back(); }
  double max_h1() const;
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time, TrajectoryRecord partial)
      : std::runtime_error(what), time_(time), partial_(std::move(partial)) {}
  double time() const { return time_; }
  const TrajectoryRecord& partial() const { return partial_; }

 private:
  double time_;
  TrajectoryRecord partial_;
};

/// Steps from u0 to T (rounded up to whole steps), recording every stride
/// steps and at the end.
TrajectoryRecord evolve(const Field& u0, double delta, double T, double dt, const EvolveOptions& options = {});

/// Zero-mean trig polynomial with modes 1..N/4, coefficients ~ k^-decay times
/// complex normal deviates of mt19937_64(seed), scaled to the given rms.
Field random_initial_state(const SpectralGrid& grid, std::uint64_t seed, double rms = 0.5, double decay = 2.0);

struct FamilyRef {
  int id = 0;
  Field u;
};

struct OmegaTolerances {
  double distance = 1e-6;  ///< H^2 shift distance
  double velocity = 1e-8;  ///< L^2 norm of u_t
};

enum class OmegaStatus { ConvergedToFamily, Undecided, NonStationary };
std::string to_string(OmegaStatus s);

struct OmegaVerdict {
  OmegaStatus status = OmegaStatus::Undecided;
  int family_id = -1;  ///< nearest family
  double shift = 0.0;
  double distance = 0.0;
  double final_time = 0.0;
  double final_velocity = 0.0;
};

OmegaVerdict classify_omega(const TrajectoryRecord& record, const std::vector<FamilyRef>& families,
                            const OmegaTolerances& tol = {});

struct RunMeta {
  double length = 0.0;
  int points = 0;
  double delta = 0.0;
  double dt = 0.0;
  double T = 0.0;
  std::uint64_t seed = 0;
  OmegaTolerances tol;
};

/// meta.json, energies.csv (t,F,E1,velocity,mean) and snapshots/*.csv.
void write_run_directory(const std::filesystem::path& dir, const TrajectoryRecord& record, const RunMeta& meta,
                         const OmegaVerdict* verdict = nullptr);

}  // namespace cch
