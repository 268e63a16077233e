#pragma once

// Rotationally invariant profile construction in the round 3-sphere.
//
// The profile curvature kappa(u) obeys
//     kappa'' = (7/4) kappa'^2 / kappa + (4/3) kappa - 4 kappa^3,
// whose solutions conserve
//     E(kappa, kappa') = kappa'^2 - c1 kappa^(7/2) + 16 kappa^4 + (16/9) kappa^2.
// Closed orbits exist exactly for c1 > 64 / 3^(5/4); at that threshold the
// orbit collapses onto the equilibrium kappa = 1/sqrt(3). The directrix of
// the assembled surface is a unit-speed spherical curve with geodesic
// curvature kappa, transported by the moving-frame system
//     sigma' = T,   T' = -sigma + kappa (sigma x T).

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "spaceform/calculus.hpp"

namespace spaceform {

// Right-hand side of the profile equation; kappa must be positive.
double kappa_rhs(double kappa, double kappa_prime, double c1);

// |E(kappa, kappa')| for the conserved quantity above.
double first_integral_residual(double kappa, double kappa_prime, double c1);

double admissible_c1_min();  // 64 / 3^(5/4)
double kappa_equilibrium();  // 1 / sqrt(3)

// Positive roots (min, max) of kappa'^2 = 0 bracketing the closed orbit.
// Throws InputError when c1 <= admissible_c1_min().
std::pair<double, double> kappa_band(double c1);

struct ProfileRow {
  double u = 0.0;
  double kappa = 0.0;
  double kappa_prime = 0.0;
  double drift = 0.0;             // scaled first-integral residual
  std::array<double, 4> sigma{};  // directrix in ambient 4-space
};

struct ProfileSolution {
  double c1 = 0.0;
  double tol = 0.0;
  double period = 0.0;         // first return to the starting section
  double period_spread = 0.0;  // max |T_k / k - T_1| over later returns
  double kappa_min_root = 0.0;
  double kappa_max_root = 0.0;
  double kappa_obs_min = 0.0;  // observed along the trajectory
  double kappa_obs_max = 0.0;
  double max_drift = 0.0;
  double constraint_residual_max = 0.0;  // max |sigma_1 - rho(kappa)|
  std::vector<ProfileRow> rows;          // one row per accepted step
};

// Integrates `periods` closed orbits starting at (kappa_max, 0) together with
// the directrix frame. The Poincare section is kappa' = 0 with kappa at a
// maximum; section times are refined by secant iteration on the local
// Hermite interpolant.
ProfileSolution integrate_profile(double c1, double tol, int periods);

// Cached evaluator for the assembled rotational surface. Each requested
// profile parameter u is integrated independently from u = 0 (no dense
// interpolation enters the chart), so chart values are smooth in u down to
// the integrator tolerance.
class RotationalSurface {
 public:
  RotationalSurface(double c1, double tol);

  double c1() const;
  double period() const;
  double kappa_min() const;
  double kappa_max() const;
  double rho(double kappa) const;   // 4 kappa^(-3/4) / (3 sqrt(c1))
  double kappa_at(double u) const;  // works for any real u (even symmetry)
  void sigma_at(double u, double out[3]) const;

  // (u, v) -> ambient 4-space; v is the rotation angle about the axis the
  // directrix keeps constant distance rho from.
  ChartFn chart() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace spaceform
