// Differential operators on chart grids plus pointwise probe jets.
//
// Sign conventions (geometers'):
//   laplace_beltrami(f) = -(1/sqrt g) d_i( sqrt g g^{ij} d_j f )
// so the Laplacian has nonnegative spectrum on compact manifolds,
//   div(grad f) = -laplace(f),  trace_g Hess f = -laplace(f).
//
// Tensor component layouts (row-major over indices):
//   metric g, inverse, (0,2)/(1,1) operators : comp i*m + j
//   Christoffel  gamma^k_{ij}               : comp (k*m + i)*m + j
//   covariant derivative of a (1,1) operator: comp (k*m + i)*m + j = D_k T^i_j
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "spaceform/ambient.hpp"
#include "spaceform/grid.hpp"

namespace spaceform {

using ChartFn = std::function<void(const double* x, double* out)>;

// Pointwise 2-jet of a chart from a 5^m probe block with spacing h
// (fourth-order accurate; independent of any lattice).
struct Jet2 {
  int m = 0, n = 0;
  double pos[5] = {};
  double d1[3][5] = {};
  double d2[3][3][5] = {};
};

Jet2 probe_jet(const ChartFn& chart, int m, int n, const double* x0, double h);

// Inverts a symmetric m x m matrix (m <= 3) in place of `ginv`; returns det.
double invert_sym(int m, const double* g, double* ginv);

// First and second chart derivatives on a lattice. Second derivatives are
// stored packed over i <= j.
struct ChartJets {
  int m = 0, n = 0;
  Field X;
  std::vector<Field> dX;     // m entries, n comps each
  std::vector<Field> d2Xp;   // m(m+1)/2 entries, n comps each
  const Field& d2(int i, int j) const;
};

ChartJets build_chart_jets(const Lattice& lat, const AmbientSpace& amb,
                           const ChartFn& chart, int jobs = 1);

// Induced metric, inverse, volume density, and Christoffel symbols.
struct MetricFields {
  int m = 0;
  Field g;
  Field ginv;
  Field detg;
  Field sqrtg;
  Field gamma;
};

MetricFields build_metric(const AmbientSpace& amb, const ChartJets& jets,
                          int jobs = 1);

// (grad f)^i = g^{ij} d_j f, for a 1-component field.
Field gradient(const Field& f, const MetricFields& mf);

// |grad f|^2 = g^{ij} d_i f d_j f.
Field gradient_norm2(const Field& f, const MetricFields& mf);

// Componentwise geometers' Laplacian (divergence form).
Field laplace_beltrami(const Field& f, const MetricFields& mf);

// Hess f_{ij} = d_i d_j f - gamma^k_{ij} d_k f (full m x m, symmetric).
Field hessian(const Field& f, const MetricFields& mf);

// div V = (1/sqrt g) d_i ( sqrt g V^i ) for a contravariant vector field.
Field div_vec(const Field& v, const MetricFields& mf);

// D_k T^i_j for a (1,1) operator field.
Field covariant_deriv_op(const Field& t, const MetricFields& mf);

// (div S)_j = g^{ik} ( d_i S_{kj} - gamma^l_{ik} S_{lj} - gamma^l_{ij} S_{kl} )
// for a symmetric (0,2) tensor field; returns a 1-form (m comps).
Field div_tensor02(const Field& s, const MetricFields& mf);

// |D T|^2 = D_k T^i_j D_l T^p_q g^{kl} g_{ip} g^{jq} from covariant_deriv_op
// output.
Field op_deriv_norm2(const Field& dt, const MetricFields& mf);

// Intrinsic (sectional/Gauss) curvature of a 2-dimensional metric, computed
// from the metric alone via the curvature tensor R_{1212}/det g.
Field gauss_curvature_intrinsic(const MetricFields& mf);

}  // namespace spaceform
