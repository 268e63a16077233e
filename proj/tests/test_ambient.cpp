// Ambient model tests: inner products per signature, tangent projection,
// and the isometry generators' defining group properties.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "spaceform/ambient.hpp"
#include "spaceform/common.hpp"

using namespace spaceform;

TEST_CASE("coordinate counts and signatures per curvature") {
  AmbientSpace e = make_ambient(0, 2);
  AmbientSpace s = make_ambient(1, 2);
  AmbientSpace h = make_ambient(-1, 2);
  CHECK(e.coords == 3);
  CHECK(s.coords == 4);
  CHECK(h.coords == 4);
  CHECK(h.sig(3) == -1.0);
  CHECK(h.sig(0) == 1.0);
  CHECK(s.sig(3) == 1.0);
  CHECK_THROWS_AS(make_ambient(2, 2), InputError);
}

TEST_CASE("minkowski inner product and hyperboloid residual") {
  AmbientSpace h = make_ambient(-1, 2);
  // cosh-sinh point on the upper sheet
  const double t = 0.7;
  double p[4] = {std::sinh(t), 0.0, 0.0, std::cosh(t)};
  CHECK(ambient_inner(h, p, p) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(manifold_residual(h, p) < 1e-15);
  double bad[4] = {std::sinh(t), 0.0, 0.0, -std::cosh(t)};  // lower sheet
  CHECK(manifold_residual(h, bad) > 0.5);
}

TEST_CASE("sphere residual and tangent projection") {
  AmbientSpace s = make_ambient(1, 2);
  double p[4] = {0.5, 0.5, 0.5, 0.5};
  CHECK(manifold_residual(s, p) < 1e-15);
  double v[4] = {1.0, 2.0, -1.0, 0.25};
  double t[4];
  project_tangent(s, p, v, t);
  CHECK(ambient_inner(s, t, p) == doctest::Approx(0.0).epsilon(1e-15));
  // projection is idempotent
  double t2[4];
  project_tangent(s, p, t, t2);
  for (int i = 0; i < 4; ++i) CHECK(t2[i] == doctest::Approx(t[i]).epsilon(1e-14));
}

TEST_CASE("hyperbolic tangent projection is minkowski-orthogonal to p") {
  AmbientSpace h = make_ambient(-1, 3);
  double p[5] = {0.3, -0.2, 0.1, 0.4, 0.0};
  p[4] = std::sqrt(1 + 0.09 + 0.04 + 0.01 + 0.16);
  CHECK(manifold_residual(h, p) < 1e-14);
  double v[5] = {1.0, 0.0, -2.0, 0.5, 0.3};
  double t[5];
  project_tangent(h, p, v, t);
  CHECK(std::abs(ambient_inner(h, t, p)) < 1e-14);
}

TEST_CASE("flat projection is the identity") {
  AmbientSpace e = make_ambient(0, 3);
  double p[4] = {1, 2, 3, 4};
  double v[4] = {0.1, -0.2, 0.3, -0.4};
  double t[4];
  project_tangent(e, p, v, t);
  for (int i = 0; i < 4; ++i) CHECK(t[i] == v[i]);
}

namespace {

// M^T diag(sig) M should reproduce diag(sig) for any model isometry matrix.
double orthogonality_defect(const AmbientSpace& amb, const Isometry& iso) {
  const int n = iso.n;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        s += amb.sig(k) * iso.mat[static_cast<std::size_t>(k) * n + i] *
             iso.mat[static_cast<std::size_t>(k) * n + j];
      }
      const double want = (i == j) ? amb.sig(i) : 0.0;
      worst = std::max(worst, std::abs(s - want));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("signed permutations are exact isometries of each model") {
  for (int c : {-1, 0, 1}) {
    AmbientSpace amb = make_ambient(c, 3);
    for (std::uint64_t seed : {1u, 2u, 77u}) {
      Isometry iso = random_signed_permutation(amb, seed);
      CHECK(orthogonality_defect(amb, iso) == 0.0);  // entries are 0/±1
      for (double t : iso.shift) CHECK(t == 0.0);
      if (c == -1) {
        // time axis fixed
        const int n = iso.n;
        CHECK(iso.mat[static_cast<std::size_t>(n - 1) * n + (n - 1)] == 1.0);
        for (int j = 0; j < n - 1; ++j) {
          CHECK(iso.mat[static_cast<std::size_t>(n - 1) * n + j] == 0.0);
          CHECK(iso.mat[static_cast<std::size_t>(j) * n + (n - 1)] == 0.0);
        }
      }
    }
  }
}

TEST_CASE("generic isometries preserve the model up to roundoff") {
  for (int c : {-1, 0, 1}) {
    AmbientSpace amb = make_ambient(c, 2);
    Isometry iso = random_generic_isometry(amb, 42, 0.1);
    CHECK(orthogonality_defect(amb, iso) < 1e-13);
    if (c != 0) {
      for (double t : iso.shift) CHECK(t == 0.0);
    }
    if (c == -1) {
      // a boosted upper-sheet point stays on the upper sheet
      double p[4] = {0.0, 0.0, 0.0, 1.0};
      double q[4];
      iso.apply(p, q);
      CHECK(manifold_residual(amb, q) < 1e-13);
      CHECK(q[3] > 0.9);
    }
    if (c == 1) {
      double p[4] = {1.0, 0.0, 0.0, 0.0};
      double q[4];
      iso.apply(p, q);
      CHECK(manifold_residual(amb, q) < 1e-13);
    }
  }
}

TEST_CASE("isometries are reproducible from their seed") {
  AmbientSpace amb = make_ambient(1, 2);
  Isometry a = random_signed_permutation(amb, 123);
  Isometry b = random_signed_permutation(amb, 123);
  CHECK(a.mat == b.mat);
  Isometry g1 = random_generic_isometry(amb, 9, 0.05);
  Isometry g2 = random_generic_isometry(amb, 9, 0.05);
  CHECK(g1.mat == g2.mat);
}
