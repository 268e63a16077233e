// Shape-operator tests against closed-form oracles: umbilical hyperspheres,
// products of round spheres, hyperbolic geodesic spheres, exact orientation
// flips, pointwise probe frames, and conformal data on isothermal charts.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "spaceform/ambient.hpp"
#include "spaceform/calculus.hpp"
#include "spaceform/grid.hpp"
#include "spaceform/shape.hpp"

using namespace spaceform;

namespace {
constexpr double kPi = 3.14159265358979323846;

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

// Fields reference their Lattice by address, so the lattice is heap-held to
// keep that address stable across the return.
struct Built {
  AmbientSpace amb;
  std::unique_ptr<Lattice> lat;
  ChartJets jets;
  MetricFields mf;
  ShapeFields sf;
};

Built build(int curvature, int m, std::vector<AxisSpec> axes, ChartFn chart,
            bool flip = false) {
  AmbientSpace amb = make_ambient(curvature, m);
  auto lat = std::make_unique<Lattice>(std::move(axes));
  ChartJets jets = build_chart_jets(*lat, amb, chart);
  MetricFields mf = build_metric(amb, jets);
  ShapeFields sf = build_shape(amb, jets, mf, flip);
  return {amb, std::move(lat), std::move(jets), std::move(mf), std::move(sf)};
}

}  // namespace

TEST_CASE("small hypersphere in the 3-sphere is umbilical with f = sqrt(1-r^2)/r") {
  const double r = 0.6;
  const double h = std::sqrt(1.0 - r * r);
  Built b = build(1, 2,
                  {{"th", 0.7, kPi - 0.7, 65, false}, {"ph", 0.0, 2 * kPi, 65, true}},
                  [r, h](const double* x, double* out) {
                    out[0] = r * std::sin(x[0]) * std::cos(x[1]);
                    out[1] = r * std::sin(x[0]) * std::sin(x[1]);
                    out[2] = r * std::cos(x[0]);
                    out[3] = h;
                  });
  // Raw-grid (no extrapolation) tolerances sit at the fourth-order stencil
  // truncation level for these trig charts.
  const double fe = h / r;
  CHECK(max_err(b.sf.f, 0, [&](const double*) { return fe; }) < 1e-5);
  CHECK(max_err(b.sf.A2, 0, [&](const double*) { return 2 * fe * fe; }) < 1e-4);
  CHECK(max_err(b.sf.lambda, 0, [&](const double*) { return fe; }) < 1e-4);
  CHECK(max_err(b.sf.lambda, 1, [&](const double*) { return fe; }) < 1e-4);

  // Umbilical: B = f g componentwise.
  Field diff = ew_axpby(1.0, b.sf.B, -fe, b.mf.g);
  for (int c = 0; c < 4; ++c) {
    CHECK(max_err(diff, c, [](const double*) { return 0.0; }) < 1e-4);
  }

  // The unit normal is tangent to the model sphere and orthonormal to the chart.
  double worst_unit = 0.0, worst_tan = 0.0, worst_pos = 0.0;
  for_each_box(*b.lat, {0, 0, 0}, 1, [&](std::size_t flat, const int*) {
    double nvec[4], pos[4], du[4];
    for (int a = 0; a < 4; ++a) {
      nvec[a] = b.sf.normal.comp(a)[flat];
      pos[a] = b.jets.X.comp(a)[flat];
      du[a] = b.jets.dX[0].comp(a)[flat];
    }
    worst_unit = std::max(worst_unit,
                          std::abs(ambient_inner(b.amb, nvec, nvec) - 1.0));
    worst_pos = std::max(worst_pos, std::abs(ambient_inner(b.amb, nvec, pos)));
    worst_tan = std::max(worst_tan, std::abs(ambient_inner(b.amb, nvec, du)));
  });
  CHECK(worst_unit < 1e-12);
  CHECK(worst_pos < 1e-10);
  CHECK(worst_tan < 1e-8);

  // Intrinsic curvature equals det A + 1 (Gauss relation in the sphere).
  Field k = gauss_curvature_intrinsic(b.mf);
  CHECK(max_err(k, 0, [&](const double*) { return fe * fe + 1.0; }) < 1e-3);
}

TEST_CASE("product of circle and 2-sphere: principal curvatures and norms") {
  const double r1 = 0.5;
  const double r2 = std::sqrt(1.0 - r1 * r1);
  Built b = build(1, 3,
                  {{"u", 0.0, 2 * kPi, 33, true},
                   {"th", 0.7, kPi - 0.7, 33, false},
                   {"ph", 0.0, 2 * kPi, 33, true}},
                  [r1, r2](const double* x, double* out) {
                    out[0] = r1 * std::cos(x[0]);
                    out[1] = r1 * std::sin(x[0]);
                    out[2] = r2 * std::sin(x[1]) * std::cos(x[2]);
                    out[3] = r2 * std::sin(x[1]) * std::sin(x[2]);
                    out[4] = r2 * std::cos(x[1]);
                  });
  const double fe = (r2 * r2 - 2 * r1 * r1) / (3 * r1 * r2);
  const double a2e = (r2 / r1) * (r2 / r1) + 2 * (r1 / r2) * (r1 / r2);
  CHECK(fe > 0);  // orientation convention keeps the closed-form sign
  CHECK(max_err(b.sf.f, 0, [&](const double*) { return fe; }) < 1e-4);
  CHECK(max_err(b.sf.A2, 0, [&](const double*) { return a2e; }) < 1e-3);
  // Descending principal curvatures: r2/r1 once, -r1/r2 twice.
  CHECK(max_err(b.sf.lambda, 0, [&](const double*) { return r2 / r1; }) < 1e-3);
  CHECK(max_err(b.sf.lambda, 1, [&](const double*) { return -r1 / r2; }) < 1e-3);
  CHECK(max_err(b.sf.lambda, 2, [&](const double*) { return -r1 / r2; }) < 1e-3);
}

TEST_CASE("geodesic sphere in hyperbolic 3-space: f = coth t, K = 1/sinh^2 t") {
  const double t = 0.8;
  const double sh = std::sinh(t), ch = std::cosh(t);
  Built b = build(-1, 2,
                  {{"th", 0.7, kPi - 0.7, 65, false}, {"ph", 0.0, 2 * kPi, 65, true}},
                  [sh, ch](const double* x, double* out) {
                    out[0] = sh * std::sin(x[0]) * std::cos(x[1]);
                    out[1] = sh * std::sin(x[0]) * std::sin(x[1]);
                    out[2] = sh * std::cos(x[0]);
                    out[3] = ch;
                  });
  const double fe = ch / sh;
  CHECK(max_err(b.sf.f, 0, [&](const double*) { return fe; }) < 1e-5);
  CHECK(max_err(b.sf.A2, 0, [&](const double*) { return 2 * fe * fe; }) < 1e-4);
  Field k = gauss_curvature_intrinsic(b.mf);
  // Gauss relation with c = -1: K = det A - 1 = coth^2 t - 1 = 1/sinh^2 t.
  CHECK(max_err(k, 0, [&](const double*) { return 1.0 / (sh * sh); }) < 1e-3);
}

TEST_CASE("orientation flip negates normal, B, f exactly and preserves A2") {
  auto chart = [](const double* x, double* out) {
    out[0] = x[0];
    out[1] = x[1];
    out[2] = x[0] * x[0] + x[1] * x[1];
  };
  std::vector<AxisSpec> axes = {{"u", -1.0, 1.0, 17, false},
                                {"v", -0.8, 1.2, 17, false}};
  Built a = build(0, 2, axes, chart, false);
  Built f = build(0, 2, axes, chart, true);
  bool ok = true;
  for_each_box(*a.lat, {0, 0, 0}, 1, [&](std::size_t flat, const int*) {
    for (int c = 0; c < 3; ++c) {
      ok = ok && (f.sf.normal.comp(c)[flat] == -a.sf.normal.comp(c)[flat]);
    }
    for (int c = 0; c < 4; ++c) {
      ok = ok && (f.sf.B.comp(c)[flat] == -a.sf.B.comp(c)[flat]);
      ok = ok && (f.sf.A.comp(c)[flat] == -a.sf.A.comp(c)[flat]);
    }
    ok = ok && (f.sf.f.comp(0)[flat] == -a.sf.f.comp(0)[flat]);
    ok = ok && (f.sf.A2.comp(0)[flat] == a.sf.A2.comp(0)[flat]);
    // Descending eigenvalues swap slots under negation.
    ok = ok && (f.sf.lambda.comp(0)[flat] == -a.sf.lambda.comp(1)[flat]);
    ok = ok && (f.sf.lambda.comp(1)[flat] == -a.sf.lambda.comp(0)[flat]);
  });
  CHECK(ok);
  CHECK(a.sf.orientation == -f.sf.orientation);
}

TEST_CASE("probe frame matches the classical paraboloid formulas") {
  auto chart = [](const double* x, double* out) {
    out[0] = x[0];
    out[1] = x[1];
    out[2] = x[0] * x[0] + x[1] * x[1];
  };
  AmbientSpace amb = make_ambient(0, 2);
  const double x0[2] = {0.3, -0.2};
  Jet2 jet = probe_jet(chart, 2, 3, x0, 5e-3);
  ProbeFrame fr = probe_frame(amb, jet);

  const double u = x0[0], v = x0[1];
  const double E = 1 + 4 * u * u, F = 4 * u * v, G = 1 + 4 * v * v;
  const double w = std::sqrt(1.0 + 4 * u * u + 4 * v * v);
  const double e = 2 / w, g2 = 2 / w;  // b12 = 0
  const double H = (E * g2 + G * e) / (2 * (E * G - F * F));
  const double Kext = (e * g2) / (E * G - F * F);
  CHECK(fr.f == doctest::Approx(H).epsilon(1e-9));
  CHECK(fr.a2 == doctest::Approx(4 * H * H - 2 * Kext).epsilon(1e-8));
  CHECK(fr.g[0] == doctest::Approx(E).epsilon(1e-10));
  CHECK(fr.g[1] == doctest::Approx(F).epsilon(1e-9));
  CHECK(fr.g[3] == doctest::Approx(G).epsilon(1e-10));
}

TEST_CASE("conformal data: minimal torus and flat cone on isothermal charts") {
  // Torus of two equal circles: constant conformal factor, zero mean curvature,
  // vanishing quadratic differential.
  const double r = 1.0 / std::sqrt(2.0);
  Built torus = build(1, 2,
                      {{"u", 0.0, 2 * kPi, 65, true}, {"v", 0.0, 2 * kPi, 65, true}},
                      [r](const double* x, double* out) {
                        out[0] = r * std::cos(x[0]);
                        out[1] = r * std::sin(x[0]);
                        out[2] = r * std::cos(x[1]);
                        out[3] = r * std::sin(x[1]);
                      });
  ConformalFields cf = build_conformal(torus.mf, torus.sf);
  CHECK(max_err(cf.factor, 0, [](const double*) { return 0.5; }) < 1e-5);
  CHECK(max_err(cf.isothermal_dev, 0, [](const double*) { return 0.0; }) < 1e-5);
  CHECK(max_err(cf.cr_residual, 0, [](const double*) { return 0.0; }) < 1e-4);

  // Flat cone on its isothermal chart: conformally flat metric and a
  // holomorphic (here: constant) quadratic differential.
  const double alpha = 1.0;
  const double beta = std::sqrt(1.0 + alpha * alpha);
  Built cone = build(0, 2,
                     {{"s", -1.0, 1.0, 65, false}, {"v", 0.0, 2 * kPi, 65, true}},
                     [alpha, beta](const double* x, double* out) {
                       const double e = std::exp(x[0] / beta);
                       out[0] = e * std::cos(x[1]);
                       out[1] = e * std::sin(x[1]);
                       out[2] = alpha * e;
                     });
  ConformalFields cc = build_conformal(cone.mf, cone.sf);
  CHECK(max_err(cc.isothermal_dev, 0, [](const double*) { return 0.0; }) < 1e-4);
  CHECK(max_err(cc.cr_residual, 0, [](const double*) { return 0.0; }) < 1e-3);
}
