// Profile-equation tests: equilibrium and conserved quantity, admissibility
// threshold and band collapse, root accuracy, period detection, drift-vs-
// tolerance scaling, half-period symmetry, the algebraic constraint along the
// directrix, and the assembled chart.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "spaceform/common.hpp"
#include "spaceform/profile_ode.hpp"

using namespace spaceform;

TEST_CASE("equilibrium and conserved-quantity snapshot") {
  const double ks = kappa_equilibrium();
  CHECK(ks == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::fabs(kappa_rhs(ks, 0.0, 20.0)) < 5e-15);
  // Fixed-input snapshot of the conserved quantity's residual definition.
  CHECK(first_integral_residual(1.0, 0.0, 20.0) ==
        doctest::Approx(20.0 / 9.0).epsilon(1e-14));
  CHECK_THROWS_AS(kappa_rhs(0.0, 1.0, 20.0), InputError);
}

TEST_CASE("admissibility threshold and band behavior") {
  const double cmin = admissible_c1_min();
  CHECK(cmin == doctest::Approx(64.0 / std::pow(3.0, 1.25)).epsilon(1e-15));
  CHECK_THROWS_AS(kappa_band(cmin * (1.0 - 1e-9)), InputError);
  CHECK_THROWS_AS(kappa_band(10.0), InputError);

  const auto wide = kappa_band(cmin + 1e-3);
  const auto narrow = kappa_band(cmin + 1e-6);
  const double ks = kappa_equilibrium();
  CHECK(wide.first < ks);
  CHECK(wide.second > ks);
  CHECK(narrow.first < ks);
  CHECK(narrow.second > ks);
  // The band collapses onto the equilibrium as c1 drops to the threshold.
  CHECK(narrow.second - narrow.first < 0.1 * (wide.second - wide.first));
  CHECK(narrow.second - narrow.first < 1e-2);

  // Roots actually solve c1 k^{3/2} - 16 k^2 - 16/9 = 0.
  const auto band = kappa_band(20.0);
  for (double k : {band.first, band.second}) {
    const double q = 20.0 * std::pow(k, 1.5) - 16.0 * k * k - 16.0 / 9.0;
    CHECK(std::fabs(q) < 1e-10);
  }
  CHECK(band.first < band.second);
}

TEST_CASE("integration: period, drift scaling, band confinement") {
  CHECK_THROWS_AS(integrate_profile(20.0, 1e-10, 0), InputError);
  CHECK_THROWS_AS(integrate_profile(20.0, 0.5, 1), InputError);
  CHECK_THROWS_AS(integrate_profile(16.0, 1e-10, 1), InputError);

  const ProfileSolution sol = integrate_profile(20.0, 1e-10, 3);
  CHECK(sol.period > 0.0);
  CHECK(sol.period_spread < 1e-6);
  CHECK_FALSE(sol.rows.empty());
  CHECK(sol.rows.front().u == 0.0);

  const auto band = kappa_band(20.0);
  CHECK(sol.kappa_min_root == doctest::Approx(band.first).epsilon(1e-12));
  CHECK(sol.kappa_max_root == doctest::Approx(band.second).epsilon(1e-12));
  // The trajectory starts at the top of the band and stays inside it.
  CHECK(sol.kappa_obs_max <= band.second + 1e-9);
  CHECK(sol.kappa_obs_min >= band.first - 1e-9);
  CHECK(sol.kappa_obs_min == doctest::Approx(band.first).epsilon(1e-6));
  for (const ProfileRow& r : sol.rows) {
    CHECK(r.kappa >= band.first - 1e-6);
    CHECK(r.kappa <= band.second + 1e-6);
  }
  // The directrix stays on the unit sphere and satisfies the first-component
  // constraint.
  CHECK(sol.constraint_residual_max < 1e-7);
  CHECK(sol.max_drift < 1e-7);

  // Conserved-quantity drift scales with the requested tolerance.
  const double d8 = integrate_profile(20.0, 1e-8, 1).max_drift;
  const double d12 = integrate_profile(20.0, 1e-12, 1).max_drift;
  CHECK(d12 < d8);
  CHECK(d12 < 1e-9);
}

TEST_CASE("assembled surface: symmetry, constraint, spherical chart") {
  RotationalSurface surf(20.0, 1e-12);
  CHECK_THROWS_AS(RotationalSurface(10.0, 1e-12), InputError);
  CHECK_THROWS_AS(RotationalSurface(20.0, 0.5), InputError);

  const double T = surf.period();
  CHECK(T > 0.0);
  CHECK(surf.kappa_at(0.0) == doctest::Approx(surf.kappa_max()).epsilon(1e-12));
  // Half-period reflection symmetry of the curvature profile.
  for (double s : {0.1 * T, 0.23 * T, 0.41 * T}) {
    CHECK(surf.kappa_at(0.5 * T + s) ==
          doctest::Approx(surf.kappa_at(0.5 * T - s)).epsilon(1e-8));
  }
  // Even extension in u: kappa even, third directrix component odd.
  double sp[3], sm[3];
  surf.sigma_at(0.37 * T, sp);
  surf.sigma_at(-0.37 * T, sm);
  CHECK(sm[0] == doctest::Approx(sp[0]).epsilon(1e-12));
  CHECK(sm[1] == doctest::Approx(sp[1]).epsilon(1e-12));
  CHECK(sm[2] == doctest::Approx(-sp[2]).epsilon(1e-12));

  // The directrix first component equals the closed form of kappa.
  for (double u : {0.0, 0.2 * T, 0.6 * T, 1.1 * T}) {
    double sg[3];
    surf.sigma_at(u, sg);
    CHECK(sg[0] == doctest::Approx(surf.rho(surf.kappa_at(u))).epsilon(1e-8));
  }

  // The chart lands exactly on the unit 3-sphere.
  ChartFn chart = surf.chart();
  for (double u : {0.1 * T, 0.8 * T}) {
    for (double v : {0.0, 1.3, 4.0}) {
      const double x[2] = {u, v};
      double y[4];
      chart(x, y);
      const double n2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
      CHECK(n2 == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  // The band accessors agree with the root finder.
  const auto band = kappa_band(20.0);
  CHECK(surf.kappa_min() == doctest::Approx(band.first).epsilon(1e-12));
  CHECK(surf.kappa_max() == doctest::Approx(band.second).epsilon(1e-12));
}
