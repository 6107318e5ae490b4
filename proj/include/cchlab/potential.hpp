#pragma once

// Double-well potential W(v) = (v^2 - 1)^2 / 4 and the orbit quartic
// P_c(u) = 2 (W(u) + c1 u + c2) whose roots bound the phase-plane orbits of
// u'' = W'(u) + c1.

#include <string>
#include <vector>

namespace cch {

struct PhaseParams {
  double c1 = 0.0;  ///< tilt constant
  double c2 = 0.0;  ///< energy constant

  friend bool operator==(const PhaseParams&, const PhaseParams&) = default;
};

/// Parameters of the trivial steady state u = 0.
inline constexpr PhaseParams kTrivialParams{0.0, -0.25};

enum class Admissibility { Admissible, Boundary, Inadmissible };

std::string to_string(Admissibility a);

/// Real roots of P_c, merged by multiplicity and sorted ascending.
struct RootQuartet {
  std::vector<double> roots;
  std::vector<int> multiplicity;
  int n_complex = 0;  ///< complex roots, counted with multiplicity
  bool admissible = false;

  int real_count() const;
  bool has_multiple_root() const;

  // Valid only when admissible: u1 < um < 0 < uM < u2.
  double u1() const { return roots.at(0); }
  double um() const { return roots.at(1); }
  double uM() const { return roots.at(2); }
  double u2() const { return roots.at(3); }
};

double eval_W(double v);
double eval_W_prime(double v);
double eval_W_second(double v);

double eval_Pc(const PhaseParams& c, double u);
double eval_Pc_prime(const PhaseParams& c, double u);

/// All real roots of P_c. Companion-matrix eigenvalues of the monic quartic,
/// clusters closer than 1e-7 (1 + |root|) merged into multiple roots, then
/// Newton polish (on P_c for simple roots, on the matching derivative for
/// multiple ones).
RootQuartet quartic_roots(const PhaseParams& c);

Admissibility classify_admissible(const PhaseParams& c);
Admissibility classify_admissible(const RootQuartet& roots);

/// r(c2) >= 0: the |c1| at which P_c acquires a double root, for c2 in
/// [-1/4, 0]. Throws DomainError outside that interval.
double boundary_r(double c2);

}  // namespace cch
