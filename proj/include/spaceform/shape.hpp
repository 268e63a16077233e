// Extrinsic geometry of an immersed hypersurface: unit normal field (with a
// deterministic continuity sweep and the "mean curvature >= 0 at the base
// node" orientation convention), second fundamental form, shape operator,
// mean curvature, principal curvatures, plus the conformal holomorphicity
// residual used on isothermal 2-dimensional charts.
#pragma once

#include "spaceform/ambient.hpp"
#include "spaceform/calculus.hpp"
#include "spaceform/grid.hpp"

namespace spaceform {

struct ShapeFields {
  int orientation = 1;  // sign applied on top of the raw Gram-Schmidt normal
  Field normal;         // ambient components of the unit normal
  Field B;              // m*m second fundamental form B_{ij} = <d2X_ij, normal>
  Field A;              // m*m shape operator A^i_j = g^{ik} B_{kj}
  Field f;              // mean curvature (1/m) tr A
  Field A2;             // |A|^2 = tr(A^2)
  Field lambda;         // principal curvatures, descending
};

// flip_orientation reverses the normal after the base-node convention is
// applied; every surviving quantity is an exact (bitwise) negation/identity.
ShapeFields build_shape(const AmbientSpace& amb, const ChartJets& jets,
                        const MetricFields& mf, bool flip_orientation = false,
                        int jobs = 1);

// Pointwise frame from a probe jet (same per-node math as the grid path).
// When align_normal is given the normal sign follows it; otherwise the sign
// makes the mean curvature nonnegative.
struct ProbeFrame {
  double g[9] = {};
  double ginv[9] = {};
  double detg = 0.0;
  double normal[5] = {};
  double b[9] = {};
  double a[9] = {};
  double f = 0.0;
  double a2 = 0.0;
};

ProbeFrame probe_frame(const AmbientSpace& amb, const Jet2& jet,
                       const double* align_normal = nullptr);

// Conformal data on a 2-dimensional chart: conformal factor estimate,
// deviation from isothermal form, the quadratic-differential components
//   P + iQ = (factor * f / 4) [ (A^1_1 - A^2_2) - i (A^1_2 + A^2_1) ],
// and the pointwise Cauchy-Riemann residual (1/2)|d(P+iQ)/d(conj w)|.
struct ConformalFields {
  Field factor;          // (g_00 + g_11)/2
  Field isothermal_dev;  // max(|g_00 - g_11|, 2|g_01|) / (g_00 + g_11)
  Field phi;             // 2 comps: P, Q
  Field cr_residual;     // 1 comp
};

ConformalFields build_conformal(const MetricFields& mf, const ShapeFields& sf,
                                int jobs = 1);

}  // namespace spaceform
