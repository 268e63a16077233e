// Differential-operator tests against closed-form oracles: polar-chart
// Christoffels, Laplacian eigenfunctions, Hessians, intrinsic curvature,
// metric compatibility, and pointwise probe jets.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "spaceform/ambient.hpp"
#include "spaceform/calculus.hpp"
#include "spaceform/common.hpp"
#include "spaceform/grid.hpp"

using namespace spaceform;

namespace {
constexpr double kPi = 3.14159265358979323846;

// max |f - oracle(coords)| over interior nodes, one component
double max_err(const Field& f, int c,
               const std::function<double(const double*)>& oracle) {
  const Lattice& lat = f.lattice();
  double worst = 0.0;
  for_each_box(lat, {0, 0, 0}, 1, [&](std::size_t flat, const int* idx) {
    double x[3] = {0, 0, 0};
    for (int d = 0; d < lat.dim(); ++d) x[d] = lat.coord(d, idx[d]);
    worst = std::max(worst, std::abs(f.comp(c)[flat] - oracle(x)));
  });
  return worst;
}

}  // namespace

TEST_CASE("probe jets reproduce circle derivatives to near machine accuracy") {
  auto circle = [](const double* x, double* out) {
    out[0] = std::cos(x[0]);
    out[1] = std::sin(x[0]);
  };
  const double t0 = 0.3;
  Jet2 jet = probe_jet(circle, 1, 2, &t0, 5e-3);
  CHECK(jet.pos[0] == doctest::Approx(std::cos(t0)).epsilon(1e-15));
  CHECK(jet.d1[0][0] == doctest::Approx(-std::sin(t0)).epsilon(1e-10));
  CHECK(jet.d1[0][1] == doctest::Approx(std::cos(t0)).epsilon(1e-10));
  CHECK(jet.d2[0][0][0] == doctest::Approx(-std::cos(t0)).epsilon(1e-9));
  CHECK(jet.d2[0][0][1] == doctest::Approx(-std::sin(t0)).epsilon(1e-9));
}

TEST_CASE("probe jets: cross derivatives are exact on low-degree polynomials") {
  auto chart = [](const double* x, double* out) {
    out[0] = x[0] * x[0] * x[1] * x[1];
    out[1] = x[0] + 3 * x[1];
  };
  double x0[2] = {0.7, -0.4};
  Jet2 jet = probe_jet(chart, 2, 2, x0, 5e-3);
  CHECK(jet.d2[0][1][0] == doctest::Approx(4 * x0[0] * x0[1]).epsilon(1e-10));
  CHECK(jet.d2[1][0][0] == jet.d2[0][1][0]);
  CHECK(jet.d2[0][1][1] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("invert_sym recovers known inverses and determinants") {
  double g2[4] = {2.0, 1.0, 1.0, 3.0};
  double gi2[4];
  CHECK(invert_sym(2, g2, gi2) == doctest::Approx(5.0));
  CHECK(gi2[0] == doctest::Approx(0.6));
  CHECK(gi2[1] == doctest::Approx(-0.2));
  CHECK(gi2[3] == doctest::Approx(0.4));

  double g3[9] = {4, 1, 0, 1, 3, 1, 0, 1, 2};
  double gi3[9];
  const double det = invert_sym(3, g3, gi3);
  CHECK(det == doctest::Approx(4 * (3 * 2 - 1) - 1 * 2));  // = 18
  // verify g * ginv = identity
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += g3[i * 3 + k] * gi3[k * 3 + j];
      CHECK(s == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("product torus chart: constant metric, vanishing christoffels") {
  AmbientSpace amb = make_ambient(1, 2);
  Lattice lat({{"u", 0.0, 2 * kPi, 65, true}, {"v", 0.0, 2 * kPi, 65, true}});
  const double r = 1.0 / std::sqrt(2.0);
  ChartJets jets = build_chart_jets(lat, amb, [r](const double* x, double* out) {
    out[0] = r * std::cos(x[0]);
    out[1] = r * std::sin(x[0]);
    out[2] = r * std::cos(x[1]);
    out[3] = r * std::sin(x[1]);
  });
  MetricFields mf = build_metric(amb, jets);
  CHECK(max_err(mf.g, 0, [](const double*) { return 0.5; }) < 5e-6);
  CHECK(max_err(mf.g, 1, [](const double*) { return 0.0; }) < 1e-14);
  CHECK(max_err(mf.g, 3, [](const double*) { return 0.5; }) < 5e-6);
  for (int c = 0; c < 8; ++c) {
    CHECK(max_err(mf.gamma, c, [](const double*) { return 0.0; }) < 1e-13);
  }
}

TEST_CASE("flat polar chart: christoffels, divergence, laplacian, hessian") {
  AmbientSpace amb = make_ambient(0, 2);
  Lattice lat({{"r", 1.0, 2.0, 33, false}, {"t", 0.0, 2 * kPi, 65, true}});
  ChartJets jets = build_chart_jets(lat, amb, [](const double* x, double* out) {
    out[0] = x[0] * std::cos(x[1]);
    out[1] = x[0] * std::sin(x[1]);
    out[2] = 0.0;
  });
  MetricFields mf = build_metric(amb, jets);

  CHECK(max_err(mf.g, 0, [](const double*) { return 1.0; }) < 1e-13);
  CHECK(max_err(mf.g, 3, [](const double* x) { return x[0] * x[0]; }) < 5e-5);

  // gamma^t_{rt} = 1/r holds exactly because the grid's stencil factors cancel
  const int c_trt = (1 * 2 + 0) * 2 + 1;
  CHECK(max_err(mf.gamma, c_trt, [](const double* x) { return 1.0 / x[0]; }) < 1e-12);
  const int c_rtt = (0 * 2 + 1) * 2 + 1;
  CHECK(max_err(mf.gamma, c_rtt, [](const double* x) { return -x[0]; }) < 5e-5);

  // scalar field r^2: gradient, laplacian (geometers' sign), hessian
  Field f = eval_chart(lat, 1,
                       [](const double* x, double* out) { out[0] = x[0] * x[0]; });
  Field gf = gradient(f, mf);
  CHECK(max_err(gf, 0, [](const double* x) { return 2 * x[0]; }) < 1e-11);
  CHECK(max_err(gf, 1, [](const double*) { return 0.0; }) < 1e-11);

  Field n2 = gradient_norm2(f, mf);
  CHECK(max_err(n2, 0, [](const double* x) { return 4 * x[0] * x[0]; }) < 1e-10);

  Field lap = laplace_beltrami(f, mf);
  CHECK(max_err(lap, 0, [](const double*) { return -4.0; }) < 1e-10);

  Field hess = hessian(f, mf);
  CHECK(max_err(hess, 0, [](const double*) { return 2.0; }) < 1e-11);
  CHECK(max_err(hess, 1, [](const double*) { return 0.0; }) < 1e-11);
  CHECK(max_err(hess, 3, [](const double* x) { return 2 * x[0] * x[0]; }) < 5e-5);

  // radial vector field V = r d_r has divergence 2
  Field v(lat, 2);
  for_each_box(lat, {kPad, kPad, 0}, 1, [&](std::size_t flat, const int* idx) {
    v.comp(0)[flat] = lat.coord(0, idx[0]);
    v.comp(1)[flat] = 0.0;
  });
  Field dv = div_vec(v, mf);
  CHECK(max_err(dv, 0, [](const double*) { return 2.0; }) < 1e-11);

  // div(grad f) = -laplace(f)
  Field dgf = div_vec(gf, mf);
  CHECK(max_err(dgf, 0, [](const double*) { return 4.0; }) < 1e-10);

  // intrinsic curvature of the flat plane vanishes
  Field k = gauss_curvature_intrinsic(mf);
  CHECK(max_err(k, 0, [](const double*) { return 0.0; }) < 1e-11);

  // |D(f id)|^2 = m |grad f|^2 with f = r
  Field t11(lat, 4);
  for_each_box(lat, {kPad, kPad, 0}, 1, [&](std::size_t flat, const int* idx) {
    const double r = lat.coord(0, idx[0]);
    t11.comp(0)[flat] = r;
    t11.comp(1)[flat] = 0.0;
    t11.comp(2)[flat] = 0.0;
    t11.comp(3)[flat] = r;
  });
  Field dt = covariant_deriv_op(t11, mf);
  Field nrm = op_deriv_norm2(dt, mf);
  CHECK(max_err(nrm, 0, [](const double*) { return 2.0; }) < 1e-10);
}

TEST_CASE("laplacian eigenfunctions on the circle") {
  AmbientSpace amb = make_ambient(0, 1);
  Lattice lat({{"t", 0.0, 2 * kPi, 65, true}});
  ChartJets jets = build_chart_jets(lat, amb, [](const double* x, double* out) {
    out[0] = std::cos(x[0]);
    out[1] = std::sin(x[0]);
  });
  MetricFields mf = build_metric(amb, jets);
  Field f = eval_chart(lat, 1,
                       [](const double* x, double* out) { out[0] = std::sin(x[0]); });
  Field lap = laplace_beltrami(f, mf);
  CHECK(max_err(lap, 0, [](const double* x) { return std::sin(x[0]); }) < 1e-5);
}

TEST_CASE("ambient coordinates of a sphere are laplacian eigenfunctions") {
  // X: S^2(r) in R^3; geometers' laplacian gives (m/r^2) X componentwise
  AmbientSpace amb = make_ambient(0, 2);
  const double r = 1.5;
  Lattice lat({{"th", 0.6, kPi - 0.6, 65, false}, {"ph", 0.0, 2 * kPi, 65, true}});
  ChartJets jets = build_chart_jets(lat, amb, [r](const double* x, double* out) {
    out[0] = r * std::sin(x[0]) * std::cos(x[1]);
    out[1] = r * std::sin(x[0]) * std::sin(x[1]);
    out[2] = r * std::cos(x[0]);
  });
  MetricFields mf = build_metric(amb, jets);
  Field lap = laplace_beltrami(jets.X, mf);
  const double ev = 2.0 / (r * r);
  CHECK(max_err(lap, 0, [&](const double* x) {
          return ev * r * std::sin(x[0]) * std::cos(x[1]);
        }) < 1e-5);
  CHECK(max_err(lap, 2, [&](const double* x) { return ev * r * std::cos(x[0]); }) <
        1e-5);

  // metric compatibility: div of g through the (0,2) route vanishes
  Field divg = div_tensor02(mf.g, mf);
  CHECK(max_err(divg, 0, [](const double*) { return 0.0; }) < 1e-12);
  CHECK(max_err(divg, 1, [](const double*) { return 0.0; }) < 1e-12);
}

TEST_CASE("intrinsic curvature: unit sphere K=1, fourth-order convergence") {
  AmbientSpace amb = make_ambient(0, 2);
  auto kerr = [&](int count) {
    Lattice lat({{"th", 0.6, kPi - 0.6, count, false},
                 {"ph", 0.0, 2 * kPi, count, true}});
    ChartJets jets =
        build_chart_jets(lat, amb, [](const double* x, double* out) {
          out[0] = std::sin(x[0]) * std::cos(x[1]);
          out[1] = std::sin(x[0]) * std::sin(x[1]);
          out[2] = std::cos(x[0]);
        });
    MetricFields mf = build_metric(amb, jets);
    Field k = gauss_curvature_intrinsic(mf);
    return max_err(k, 0, [](const double*) { return 1.0; });
  };
  const double e65 = kerr(65);
  const double e129 = kerr(129);
  CHECK(e65 < 1e-5);
  CHECK(e65 / e129 > 10.0);  // at least third-order observed convergence
}

TEST_CASE("covariant derivative of the identity operator vanishes") {
  AmbientSpace amb = make_ambient(0, 2);
  Lattice lat({{"r", 1.0, 2.0, 17, false}, {"t", 0.0, 2 * kPi, 33, true}});
  ChartJets jets = build_chart_jets(lat, amb, [](const double* x, double* out) {
    out[0] = x[0] * std::cos(x[1]);
    out[1] = x[0] * std::sin(x[1]);
    out[2] = 0.0;
  });
  MetricFields mf = build_metric(amb, jets);
  Field id(lat, 4);
  for_each_box(lat, {kPad, kPad, 0}, 1, [&](std::size_t flat, const int*) {
    id.comp(0)[flat] = 1.0;
    id.comp(3)[flat] = 1.0;
  });
  Field did = covariant_deriv_op(id, mf);
  for (int c = 0; c < 8; ++c) {
    CHECK(max_err(did, c, [](const double*) { return 0.0; }) < 1e-12);
  }
}
