// Ambient model spaces for hypersurfaces of dimension m:
//   curvature  0  -> Euclidean R^{m+1}
//   curvature +1  -> unit sphere S^{m+1} embedded in R^{m+2}
//   curvature -1  -> hyperbolic H^{m+1}: upper sheet of <p,p> = -1 in
//                    Minkowski R^{m+2} (last coordinate timelike)
// plus ambient-isometry generators used for invariance testing: signed
// coordinate permutations (exactly representable, only ulp-level summation
// reordering downstream) and generic small rotations/boosts/translations.
#pragma once

#include <cstdint>
#include <vector>

namespace spaceform {

struct AmbientSpace {
  int curvature = 0;  // -1, 0, +1
  int m = 2;          // hypersurface dimension
  int coords = 3;     // ambient coordinate count
  // Metric sign of coordinate a (-1 only for the hyperbolic time axis).
  double sig(int a) const {
    return (curvature == -1 && a == coords - 1) ? -1.0 : 1.0;
  }
};

AmbientSpace make_ambient(int curvature, int m);

double ambient_inner(const AmbientSpace& amb, const double* a, const double* b);

// Deviation of p from the model constraint (0 in the flat case); the
// hyperbolic residual also penalizes leaving the upper sheet.
double manifold_residual(const AmbientSpace& amb, const double* p);

// Orthogonal projection of v onto the model tangent space at p.
void project_tangent(const AmbientSpace& amb, const double* p, const double* v,
                     double* out);

// Affine ambient isometry y = M x + t (t is zero unless curvature == 0).
struct Isometry {
  int n = 0;
  std::vector<double> mat;    // n x n, row-major
  std::vector<double> shift;  // n
  void apply(const double* x, double* y) const;
};

Isometry identity_isometry(const AmbientSpace& amb);

// Random signed permutation of the spatial coordinates (the hyperbolic time
// axis stays fixed). Chart values transform exactly; downstream differences
// are pure summation-order roundoff.
Isometry random_signed_permutation(const AmbientSpace& amb, std::uint64_t seed);

/// Random small generic isometry: rotation (and boost in the hyperbolic case)
// of magnitude `eps` in the Lie algebra, plus a translation in the flat case.
Isometry random_generic_isometry(const AmbientSpace& amb, std::uint64_t seed,
                                 double eps = 0.1);

}  // namespace spaceform
