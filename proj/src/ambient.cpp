// Model-space inner products, tangent projection, and isometry generators.
#include "spaceform/ambient.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "spaceform/common.hpp"

namespace spaceform {

namespace {

// Deterministic uniform in [0,1) from the engine's raw 64-bit output
// (distribution classes vary across standard libraries).
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// exp(A) for small square matrices via plain Taylor series; adequate for the
// small-norm algebra elements generated here.
std::vector<double> small_matrix_exp(const std::vector<double>& a, int n) {
  std::vector<double> result(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> term(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    result[static_cast<std::size_t>(i) * n + i] = 1.0;
    term[static_cast<std::size_t>(i) * n + i] = 1.0;
  }
  for (int k = 1; k <= 30; ++k) {
    std::vector<double> next(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) {
          s += term[static_cast<std::size_t>(i) * n + l] *
               a[static_cast<std::size_t>(l) * n + j];
        }
        next[static_cast<std::size_t>(i) * n + j] = s / k;
      }
    }
    term = next;
    for (std::size_t idx = 0; idx < result.size(); ++idx) result[idx] += term[idx];
  }
  return result;
}

}  // namespace

AmbientSpace make_ambient(int curvature, int m) {
  if (curvature < -1 || curvature > 1) {
    throw InputError("ambient curvature must be -1, 0, or +1");
  }
  if (m < 1 || m > 3) throw InputError("hypersurface dimension must be 1..3");
  AmbientSpace amb;
  amb.curvature = curvature;
  amb.m = m;
  amb.coords = (curvature == 0) ? m + 1 : m + 2;
  return amb;
}

double ambient_inner(const AmbientSpace& amb, const double* a, const double* b) {
  // Positive and negative products are summed separately in ascending
  // magnitude order, then subtracted once. The two partial sums depend only
  // on the multisets of signed products, so the result is bitwise invariant
  // under signed coordinate permutations and exactly antisymmetric under
  // negating one argument; downstream derivative chains cannot amplify
  // reordering roundoff.
  const int n = amb.coords;
  double pos[5], neg[5];
  int np = 0, nn = 0;
  for (int i = 0; i < n; ++i) {
    double t = a[i] * b[i];
    if (amb.curvature == -1 && i == n - 1) t = -t;
    if (t > 0.0) {
      pos[np++] = t;
    } else if (t < 0.0) {
      neg[nn++] = -t;
    }
  }
  auto sorted_sum = [](double* v, int k) {
    for (int i = 1; i < k; ++i) {  // insertion sort, ascending
      const double x = v[i];
      int j = i - 1;
      while (j >= 0 && v[j] > x) {
        v[j + 1] = v[j];
        --j;
      }
      v[j + 1] = x;
    }
    double s = 0.0;
    for (int i = 0; i < k; ++i) s += v[i];
    return s;
  };
  return sorted_sum(pos, np) - sorted_sum(neg, nn);
}

double manifold_residual(const AmbientSpace& amb, const double* p) {
  if (amb.curvature == 0) return 0.0;
  const double q = ambient_inner(amb, p, p);
  double r = std::abs(q - amb.curvature);
  if (amb.curvature == -1 && !(p[amb.coords - 1] > 0.0)) r += 1.0;
  return r;
}

void project_tangent(const AmbientSpace& amb, const double* p, const double* v,
                     double* out) {
  const int n = amb.coords;
  if (amb.curvature == 0) {
    for (int i = 0; i < n; ++i) out[i] = v[i];
    return;
  }
  // <p,p> = c on the model, so the normal component of v is c<v,p> p.
  const double vp = ambient_inner(amb, v, p);
  const double coeff = amb.curvature * vp;
  for (int i = 0; i < n; ++i) out[i] = v[i] - coeff * p[i];
}

void Isometry::apply(const double* x, double* y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      s += mat[static_cast<std::size_t>(i) * n + j] * x[j];
    }
    y[i] = s + shift[static_cast<std::size_t>(i)];
  }
}

Isometry identity_isometry(const AmbientSpace& amb) {
  Isometry iso;
  iso.n = amb.coords;
  iso.mat.assign(static_cast<std::size_t>(iso.n) * iso.n, 0.0);
  iso.shift.assign(static_cast<std::size_t>(iso.n), 0.0);
  for (int i = 0; i < iso.n; ++i) iso.mat[static_cast<std::size_t>(i) * iso.n + i] = 1.0;
  return iso;
}

Isometry random_signed_permutation(const AmbientSpace& amb, std::uint64_t seed) {
  Isometry iso = identity_isometry(amb);
  const int n = amb.coords;
  const int spatial = (amb.curvature == -1) ? n - 1 : n;
  std::mt19937_64 rng(seed);
  std::vector<int> perm(static_cast<std::size_t>(spatial));
  for (int i = 0; i < spatial; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = spatial - 1; i > 0; --i) {
    const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::fill(iso.mat.begin(), iso.mat.end(), 0.0);
  for (int i = 0; i < spatial; ++i) {
    const double sign = (rng() & 1u) ? -1.0 : 1.0;
    iso.mat[static_cast<std::size_t>(i) * n + perm[static_cast<std::size_t>(i)]] = sign;
  }
  if (amb.curvature == -1) iso.mat[static_cast<std::size_t>(n - 1) * n + (n - 1)] = 1.0;
  return iso;
}

Isometry random_generic_isometry(const AmbientSpace& amb, std::uint64_t seed,
                                 double eps) {
  const int n = amb.coords;
  std::mt19937_64 rng(seed);
  std::vector<double> k(static_cast<std::size_t>(n) * n, 0.0);
  const int spatial = (amb.curvature == -1) ? n - 1 : n;
  for (int i = 0; i < spatial; ++i) {
    for (int j = i + 1; j < spatial; ++j) {
      const double w = eps * (2.0 * uniform01(rng) - 1.0);
      k[static_cast<std::size_t>(i) * n + j] = w;
      k[static_cast<std::size_t>(j) * n + i] = -w;
    }
  }
  if (amb.curvature == -1) {
    // Boost block: symmetric pairing with the time axis stays in the Lorentz
    // algebra and preserves the upper sheet for small parameters.
    for (int i = 0; i < n - 1; ++i) {
      const double b = eps * (2.0 * uniform01(rng) - 1.0);
      k[static_cast<std::size_t>(i) * n + (n - 1)] = b;
      k[static_cast<std::size_t>(n - 1) * n + i] = b;
    }
  }
  Isometry iso;
  iso.n = n;
  iso.mat = small_matrix_exp(k, n);
  iso.shift.assign(static_cast<std::size_t>(n), 0.0);
  if (amb.curvature == 0) {
    for (int i = 0; i < n; ++i) {
      iso.shift[static_cast<std::size_t>(i)] = 2.0 * uniform01(rng) - 1.0;
    }
  }
  return iso;
}

}  // namespace spaceform
