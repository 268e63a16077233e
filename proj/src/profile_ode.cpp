#include "spaceform/profile_ode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "spaceform/common.hpp"

namespace spaceform {

namespace {

constexpr int kDim = 8;  // (kappa, kappa', sigma[3], T[3])
using State = std::array<double, kDim>;

// Dormand-Prince 5(4) coefficients (FSAL pair; the 7th stage sits at the
// step endpoint).
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0, 500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0};
constexpr double kB4[7] = {5179.0 / 57600,     0,           7571.0 / 16695,
                           393.0 / 640,        -92097.0 / 339200,
                           187.0 / 2100,       1.0 / 40};

void profile_rhs(double c1, const State& y, State& dy) {
  const double k = y[0];
  const double kp = y[1];
  if (!(k > 0.0)) {
    throw NumericalError("profile curvature left the positive half-line");
  }
  dy[0] = kp;
  dy[1] = kappa_rhs(k, kp, c1);
  dy[2] = y[5];
  dy[3] = y[6];
  dy[4] = y[7];
  const double cx = y[3] * y[7] - y[4] * y[6];
  const double cy = y[4] * y[5] - y[2] * y[7];
  const double cz = y[2] * y[6] - y[3] * y[5];
  dy[5] = -y[2] + k * cx;
  dy[6] = -y[3] + k * cy;
  dy[7] = -y[4] + k * cz;
}

// Keeps the directrix frame on the unit sphere: |sigma| = 1, T unit and
// tangent. Corrections are at roundoff scale for accepted steps.
void renormalize(State& y) {
  double sn = std::sqrt(y[2] * y[2] + y[3] * y[3] + y[4] * y[4]);
  if (sn > 0.0) {
    y[2] /= sn;
    y[3] /= sn;
    y[4] /= sn;
  }
  const double dot = y[2] * y[5] + y[3] * y[6] + y[4] * y[7];
  y[5] -= dot * y[2];
  y[6] -= dot * y[3];
  y[7] -= dot * y[4];
  double tn = std::sqrt(y[5] * y[5] + y[6] * y[6] + y[7] * y[7]);
  if (tn > 0.0) {
    y[5] /= tn;
    y[6] /= tn;
    y[7] /= tn;
  }
}

struct StepRecord {
  double u0 = 0.0, u1 = 0.0;
  State y0{}, y1{};
  State f0{}, f1{};
};

// Adaptive Dormand-Prince driver. Calls on_step after every accepted (and
// renormalized) step; integration stops once u reaches u_end or on_step
// returns false.
template <typename OnStep>
void integrate_adaptive(double c1, double tol, double u_end, State y,
                        const OnStep& on_step) {
  const double atol = tol;
  const double rtol = tol;
  double u = 0.0;
  double h = std::min(1e-2, u_end > 0.0 ? u_end : 1e-2);
  double errold = 1e-4;
  State k[7];
  profile_rhs(c1, y, k[0]);
  long steps = 0;
  const long max_steps = 20000000;
  while (true) {
    const double remaining = u_end - u;
    if (remaining <= 1e-14 * std::max(1.0, std::fabs(u_end))) break;
    if (++steps > max_steps) {
      throw NumericalError("profile integration exceeded the step budget");
    }
    if (h < 1e-14) {
      throw NumericalError("profile integration step size collapsed");
    }
    h = std::min(h, remaining);
    State ytmp;
    for (int s = 1; s < 7; ++s) {
      for (int i = 0; i < kDim; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * k[j][i];
        ytmp[i] = y[i] + h * acc;
      }
      profile_rhs(c1, ytmp, k[s]);
    }
    // Stage 7 uses the 5th-order weights, so ytmp is already y1.
    State y1 = ytmp;
    double err = 0.0;
    for (int i = 0; i < kDim; ++i) {
      double e = 0.0;
      for (int j = 0; j < 7; ++j) e += (kB5[j] - kB4[j]) * k[j][i];
      e *= h;
      const double sc = atol + rtol * std::max(std::fabs(y[i]), std::fabs(y1[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / kDim);
    const double expo = 0.2 - 0.04 * 0.75;
    double fac = std::pow(std::max(err, 1e-32), expo) /
                 std::pow(std::max(errold, 1e-4), 0.04);
    fac = std::max(0.2, std::min(5.0, 0.9 / fac));
    if (err <= 1.0) {
      StepRecord rec;
      rec.u0 = u;
      rec.y0 = y;
      rec.f0 = k[0];
      renormalize(y1);
      rec.u1 = u + h;
      rec.y1 = y1;
      profile_rhs(c1, y1, rec.f1);
      u += h;
      y = y1;
      k[0] = rec.f1;  // FSAL slot, recomputed at the renormalized state
      errold = std::max(err, 1e-10);
      h *= fac;
      if (!on_step(rec)) return;
    } else {
      h *= std::min(1.0, fac);
    }
  }
}

double hermite(double t0, double v0, double d0, double t1, double v1, double d1,
               double t) {
  const double w = t1 - t0;
  const double s = (t - t0) / w;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * v0 + (s3 - 2 * s2 + s) * w * d0 +
         (-2 * s3 + 3 * s2) * v1 + (s3 - s2) * w * d1;
}

// Root of the cubic Hermite model of kappa' inside an accepted step, located
// by bracketed secant iteration.
double refine_section(const StepRecord& r) {
  auto g = [&](double t) {
    return hermite(r.u0, r.y0[1], r.f0[1], r.u1, r.y1[1], r.f1[1], t);
  };
  double a = r.u0, b = r.u1;
  double ga = g(a), gb = g(b);
  double x0 = a, x1 = b, g0 = ga, g1 = gb;
  for (int it = 0; it < 100; ++it) {
    double x2;
    if (g1 != g0) {
      x2 = x1 - g1 * (x1 - x0) / (g1 - g0);
    } else {
      x2 = 0.5 * (a + b);
    }
    if (!(x2 > a && x2 < b)) x2 = 0.5 * (a + b);
    const double g2 = g(x2);
    if ((ga <= 0.0) != (g2 <= 0.0)) {
      b = x2;
      gb = g2;
    } else {
      a = x2;
      ga = g2;
    }
    x0 = x1;
    g0 = g1;
    x1 = x2;
    g1 = g2;
    if (std::fabs(b - a) < 1e-15 * std::max(1.0, std::fabs(b))) break;
  }
  return 0.5 * (a + b);
}

double sq(double x) { return x * x; }

State initial_state(double c1, double kappa_max) {
  const double x1 = 4.0 * std::pow(kappa_max, -0.75) / (3.0 * std::sqrt(c1));
  if (!(x1 <= 1.0)) {
    throw NumericalError("directrix axis distance exceeds the sphere radius");
  }
  State y{};
  y[0] = kappa_max;
  y[1] = 0.0;
  y[2] = x1;
  y[3] = std::sqrt(std::max(0.0, 1.0 - x1 * x1));
  y[4] = 0.0;
  y[5] = 0.0;
  y[6] = 0.0;
  y[7] = 1.0;
  return y;
}

void check_tol(double tol) {
  if (!(tol >= 1e-14 && tol <= 1e-2)) {
    throw InputError("ode tolerance must lie in [1e-14, 1e-2]");
  }
}

}  // namespace

double kappa_rhs(double kappa, double kappa_prime, double c1) {
  if (!(kappa > 0.0)) {
    throw InputError("kappa must be positive");
  }
  (void)c1;  // the equation itself does not involve c1
  return 1.75 * kappa_prime * kappa_prime / kappa + (4.0 / 3.0) * kappa -
         4.0 * kappa * kappa * kappa;
}

double first_integral_residual(double kappa, double kappa_prime, double c1) {
  if (!(kappa > 0.0)) {
    throw InputError("kappa must be positive");
  }
  return std::fabs(kappa_prime * kappa_prime - c1 * std::pow(kappa, 3.5) +
                   16.0 * std::pow(kappa, 4) + (16.0 / 9.0) * kappa * kappa);
}

double admissible_c1_min() { return 64.0 / std::pow(3.0, 1.25); }

double kappa_equilibrium() { return 1.0 / std::sqrt(3.0); }

std::pair<double, double> kappa_band(double c1) {
  const double c1_min = admissible_c1_min();
  const std::string range =
      "requires c1 > 64/3^(5/4) = " + format_g17(c1_min);
  if (!(c1 > c1_min)) {
    throw InputError("no closed profile band for c1 = " + format_g17(c1) +
                     "; " + range);
  }
  auto q = [&](double kappa) {
    return c1 * std::pow(kappa, 1.5) - 16.0 * kappa * kappa - 16.0 / 9.0;
  };
  const double ks = kappa_equilibrium();
  if (!(q(ks) > 0.0)) {
    throw InputError("profile band is numerically degenerate at c1 = " +
                     format_g17(c1) + "; " + range);
  }
  auto bisect = [&](double lo, double hi) {
    // q(lo) and q(hi) have opposite signs on entry.
    const bool lo_pos = q(lo) > 0.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if ((q(mid) > 0.0) == lo_pos) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  double lo = ks;
  while (q(lo) > 0.0) {
    lo *= 0.5;
    if (lo < 1e-12) throw NumericalError("profile band lower root not bracketed");
  }
  double hi = std::max(1.0, sq(c1 / 16.0) + 1.0);
  while (q(hi) >= 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("profile band upper root not bracketed");
  }
  const double kmin = bisect(ks, lo);
  const double kmax = bisect(ks, hi);
  return {std::min(kmin, kmax), std::max(kmin, kmax)};
}

ProfileSolution integrate_profile(double c1, double tol, int periods) {
  check_tol(tol);
  if (periods < 1 || periods > 1000) {
    throw InputError("periods must lie in [1, 1000]");
  }
  const auto band = kappa_band(c1);
  const double kmax = band.second;
  const double rho_scale = 3.0 * std::sqrt(c1);
  const double e_scale = c1 * std::pow(kmax, 3.5) + 16.0 * std::pow(kmax, 4) +
                         (16.0 / 9.0) * kmax * kmax;

  ProfileSolution sol;
  sol.c1 = c1;
  sol.tol = tol;
  sol.kappa_min_root = band.first;
  sol.kappa_max_root = band.second;
  sol.kappa_obs_min = kmax;
  sol.kappa_obs_max = kmax;

  State y0 = initial_state(c1, kmax);
  auto record = [&](double u, const State& y) {
    ProfileRow row;
    row.u = u;
    row.kappa = y[0];
    row.kappa_prime = y[1];
    row.drift = first_integral_residual(y[0], y[1], c1) / e_scale;
    row.sigma = {y[2], y[3], y[4], 0.0};
    sol.rows.push_back(row);
    sol.max_drift = std::max(sol.max_drift, row.drift);
    sol.kappa_obs_min = std::min(sol.kappa_obs_min, y[0]);
    sol.kappa_obs_max = std::max(sol.kappa_obs_max, y[0]);
    const double rho = 4.0 * std::pow(y[0], -0.75) / rho_scale;
    sol.constraint_residual_max =
        std::max(sol.constraint_residual_max, std::fabs(y[2] - rho));
  };
  record(0.0, y0);

  std::vector<double> maxima;
  // Generous horizon: the period of the closed orbit is O(1) on this scale.
  const double u_cap = 1e4;
  integrate_adaptive(c1, tol, u_cap, y0, [&](const StepRecord& r) {
    record(r.u1, r.y1);
    const bool was_positive = r.y0[1] > 0.0;
    const bool crosses = (r.y0[1] > 0.0 && r.y1[1] <= 0.0) ||
                         (r.y0[1] < 0.0 && r.y1[1] >= 0.0);
    if (crosses && r.u0 > 0.0) {
      const double us = refine_section(r);
      double ks =
          hermite(r.u0, r.y0[0], r.y0[1], r.u1, r.y1[0], r.y1[1], us);
      // The Hermite estimate of the turning value carries the interpolant's
      // O(h^4) error, far above the integrator's conserved-quantity drift.
      // Newton-project it onto the energy level of the step endpoint, which
      // pins the extremum down to the drift level.
      const double ey = r.y1[1] * r.y1[1] - c1 * std::pow(r.y1[0], 3.5) +
                        16.0 * std::pow(r.y1[0], 4) +
                        (16.0 / 9.0) * r.y1[0] * r.y1[0];
      for (int it = 0; it < 4 && ks > 0.0; ++it) {
        const double g = -c1 * std::pow(ks, 3.5) + 16.0 * std::pow(ks, 4) +
                         (16.0 / 9.0) * ks * ks - ey;
        const double dg = -3.5 * c1 * std::pow(ks, 2.5) + 64.0 * ks * ks * ks +
                          (32.0 / 9.0) * ks;
        if (!(std::fabs(dg) > 1e-12)) break;
        ks -= g / dg;
      }
      sol.kappa_obs_min = std::min(sol.kappa_obs_min, ks);
      sol.kappa_obs_max = std::max(sol.kappa_obs_max, ks);
      if (was_positive) {
        maxima.push_back(us);  // kappa' falls through zero: a maximum
        if (static_cast<int>(maxima.size()) >= periods) return false;
      }
    }
    return true;
  });
  if (static_cast<int>(maxima.size()) < periods) {
    throw NumericalError("profile orbit never returned to the section");
  }
  sol.period = maxima.front();
  for (std::size_t i = 1; i < maxima.size(); ++i) {
    sol.period_spread =
        std::max(sol.period_spread,
                 std::fabs(maxima[i] / static_cast<double>(i + 1) - sol.period));
  }
  return sol;
}

struct RotationalSurface::Impl {
  double c1 = 0.0;
  double tol = 0.0;
  double kmin = 0.0;
  double kmax = 0.0;
  double period = 0.0;
  State y0{};
  mutable std::mutex mu;
  mutable std::map<double, State> cache;

  State state_at_abs(double u) const {
    if (u == 0.0) return y0;
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = cache.find(u);
      if (it != cache.end()) return it->second;
    }
    State out = y0;
    integrate_adaptive(c1, tol, u, y0, [&](const StepRecord& r) {
      out = r.y1;
      return true;
    });
    {
      std::lock_guard<std::mutex> lock(mu);
      cache.emplace(u, out);
    }
    return out;
  }
};

RotationalSurface::RotationalSurface(double c1, double tol)
    : impl_(std::make_shared<Impl>()) {
  check_tol(tol);
  const auto band = kappa_band(c1);
  impl_->c1 = c1;
  impl_->tol = tol;
  impl_->kmin = band.first;
  impl_->kmax = band.second;
  impl_->y0 = initial_state(c1, band.second);
  ProfileSolution probe = integrate_profile(c1, tol, 2);
  if (probe.max_drift > 1e3 * tol) {
    throw NumericalError("profile integration drift exceeded its budget");
  }
  impl_->period = probe.period;
}

double RotationalSurface::c1() const { return impl_->c1; }
double RotationalSurface::period() const { return impl_->period; }
double RotationalSurface::kappa_min() const { return impl_->kmin; }
double RotationalSurface::kappa_max() const { return impl_->kmax; }

double RotationalSurface::rho(double kappa) const {
  return 4.0 * std::pow(kappa, -0.75) / (3.0 * std::sqrt(impl_->c1));
}

double RotationalSurface::kappa_at(double u) const {
  return impl_->state_at_abs(std::fabs(u))[0];
}

void RotationalSurface::sigma_at(double u, double out[3]) const {
  const State s = impl_->state_at_abs(std::fabs(u));
  out[0] = s[2];
  out[1] = s[3];
  // The orbit starts at a curvature maximum, so the directrix is symmetric
  // under u -> -u up to a reflection of the third coordinate.
  out[2] = u < 0.0 ? -s[4] : s[4];
}

ChartFn RotationalSurface::chart() const {
  auto impl = impl_;
  return [impl](const double* x, double* out) {
    const double u = x[0];
    const double v = x[1];
    const State s = impl->state_at_abs(std::fabs(u));
    const double s1 = s[2];
    const double s2 = s[3];
    const double s3 = u < 0.0 ? -s[4] : s[4];
    out[0] = s1 * std::cos(v);
    out[1] = s2;
    out[2] = s3;
    out[3] = s1 * std::sin(v);
  };
}

}  // namespace spaceform
