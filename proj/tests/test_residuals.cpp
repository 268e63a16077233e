// Verification-engine tests: universal identities on a generic graph chart,
// the Euclidean rotational surface (normalization calibration, curvature law
// and PDE, the gradient inequality realized with equality), spectral splits
// on a product of spheres, guard semantics, orientation/isometry invariance,
// job-count determinism, and refinement behavior.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "spaceform/catalog.hpp"
#include "spaceform/residuals.hpp"

using namespace spaceform;

namespace {

SurfaceDef graph_surface() {
  SurfaceDef d;
  d.id = "graph";
  d.amb = make_ambient(0, 2);
  d.axes = {{"u", -1.0, 1.0, 65, false}, {"v", -1.0, 1.0, 65, false}};
  d.chart = [](const double* x, double* out) {
    out[0] = x[0];
    out[1] = x[1];
    out[2] = x[0] * x[0] + 2.0 * x[1] * x[1] + 0.5 * x[0] * x[1] +
             0.3 * x[0] * x[0] * x[0];
  };
  return d;
}

double rel(const SurfaceReport& rep, const char* entry) {
  const EntryStats* e = rep.find(entry);
  REQUIRE(e != nullptr);
  return e->max_rel;
}

const Verdict* verdict(const SurfaceReport& rep, const std::string& claim) {
  for (const Verdict& v : rep.verdicts) {
    if (v.claim == claim) return &v;
  }
  return nullptr;
}

}  // namespace

TEST_CASE("generic graph: universal identities hold, special equations do not") {
  SurfaceReport rep = verify_surface(graph_surface(), VerifyOptions{});

  // Algebraic two-route checks are exact up to roundoff.
  CHECK(rel(rep, "stress_trace") < 1e-12);
  CHECK(rel(rep, "stress_norm") < 1e-12);
  // Differential identities valid for every hypersurface; the floors sit at
  // the extrapolated stencil-error level of their third/fourth-order chains.
  CHECK(rel(rep, "stress_divergence") < 1e-5);
  CHECK(rel(rep, "shape_norm_laplacian") < 2e-4);
  CHECK(rel(rep, "gauss_vs_shape") < 1e-7);
  // Flat ambient: the model constraint is vacuous.
  CHECK(rep.find("on_manifold")->max_abs == 0.0);
  // A generic graph satisfies none of the special equations.
  CHECK(rel(rep, "biconservative") > 1e-2);
  CHECK(rel(rep, "biharmonic_normal") > 1e-2);
  CHECK(rel(rep, "hessian_identity") > 1e-3);
  CHECK(rep.value("mean_curvature_spread") > 1e-2);
}

TEST_CASE("rotational surface in R^3: calibration, curvature law, sharp gradient bound") {
  SurfaceDef def = instantiate("bicons_r3", {});
  SurfaceReport rep = verify_surface(def, VerifyOptions{});

  CHECK(rep.all_pass());
  CHECK(rel(rep, "metric_match") < 1e-8);
  CHECK(rel(rep, "curvature_profile_match") < 1e-6);
  CHECK(rel(rep, "biconservative") < 1e-6);
  CHECK(rel(rep, "linear_weingarten") < 1e-6);
  CHECK(rel(rep, "curvature_law") < 1e-6);
  CHECK(rel(rep, "curvature_pde") < 1e-3);

  // The tangency identity holds with the 2<A, Hess f> normalization and
  // visibly fails with the (2/m)<A, Hess f> one; the report says so.
  CHECK(rel(rep, "hessian_identity") < 1e-4);
  CHECK(rel(rep, "hessian_identity_alt") > 1e-2);
  CHECK(rep.notes.find("first") != std::string::npos);

  // |DA|^2 >= 28 |grad f|^2 with m = 2: this surface realizes the bound with
  // equality everywhere, so both the violation and the slack must vanish --
  // together they pin the constant 28 from both sides.
  CHECK(rel(rep, "gradient_bound_margin") < 1e-8);
  CHECK(std::fabs(rep.value("gradient_bound_margin_min_rel")) < 1e-8);

  // Level curves of the intrinsic curvature have the predicted geodesic
  // curvature wherever the gradient is usable.
  const EntryStats* lc = rep.find("level_curve_circles");
  REQUIRE(lc != nullptr);
  CHECK(lc->n > 0);
  CHECK(lc->max_rel < 1e-3);
  CHECK(rep.value("level_curve_nodes_excluded") > 0.0);

  // Not constant mean curvature, not in the fourth-order kernel.
  CHECK(rep.value("mean_curvature_spread") > 1e-3);
  CHECK(rel(rep, "biharmonic_normal") > 0.1);
}

TEST_CASE("product of 2-sphere and circle: spectral split with eigenvalues 2 and 4") {
  SurfaceDef def = instantiate("clifford_product", {{"m1", 2}, {"m2", 1}});
  SurfaceReport rep = verify_surface(def, VerifyOptions{});

  CHECK(rep.all_pass());
  CHECK(rep.value("position_split_eigen_low") == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(rep.value("position_split_eigen_high") == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(rel(rep, "position_split_low") < 1e-5);
  CHECK(rel(rep, "position_split_high") < 1e-5);
  CHECK(rel(rep, "position_split_norms") < 1e-8);

  const Verdict* gap = verdict(rep, "mean_curvature_gap");
  REQUIRE(gap != nullptr);
  CHECK(gap->status == "pass");
  CHECK(gap->observed == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("guards mark claims skipped, never silently passed") {
  SurfaceDef def = instantiate("small_hypersphere", {{"r", 0.9}});
  SurfaceReport rep = verify_surface(def, VerifyOptions{});

  CHECK_FALSE(rep.all_pass());
  const Verdict* bh = verdict(rep, "biharmonic_normal");
  REQUIRE(bh != nullptr);
  CHECK(bh->status == "fail");

  const Verdict* cmc = verdict(rep, "constant_mean_curvature");
  REQUIRE(cmc != nullptr);
  CHECK(cmc->status == "pass");

  // Gap membership and the splits require the full fourth-order system.
  const Verdict* gap = verdict(rep, "mean_curvature_gap");
  REQUIRE(gap != nullptr);
  CHECK(gap->status == "skipped");
  CHECK(gap->reason.find("biharmonic") != std::string::npos);
  const Verdict* lo = verdict(rep, "position_split_low");
  REQUIRE(lo != nullptr);
  CHECK(lo->status == "skipped");
}

TEST_CASE("orientation flip and ambient isometries change no statistic") {
  SurfaceDef def = instantiate("bicons_r3", {});
  VerifyOptions base;
  base.counts = 33;
  SurfaceReport r0 = verify_surface(def, base);

  VerifyOptions flip = base;
  flip.flip_orientation = true;
  CHECK(report_scalar_defect(r0, verify_surface(def, flip)) < 1e-12);

  // Signed permutations transform the chart exactly and every ambient
  // reduction is order-canonical, so only seed-tie roundoff survives.
  VerifyOptions perm = base;
  perm.isometry = random_signed_permutation(def.amb, 7);
  CHECK(report_scalar_defect(r0, verify_surface(def, perm)) < 1e-10);

  // A generic rotation changes the stencil truncation error itself, so the
  // defect is bounded by the coarse-grid residual floors, not by roundoff.
  VerifyOptions gen = base;
  gen.isometry = random_generic_isometry(def.amb, 3);
  CHECK(report_scalar_defect(r0, verify_surface(def, gen)) < 1e-4);

  // Structural mismatch is reported as infinite defect.
  SurfaceReport other = verify_surface(graph_surface(), VerifyOptions{});
  CHECK(std::isinf(report_scalar_defect(r0, other)));
}

TEST_CASE("reports are byte-deterministic across job counts") {
  SurfaceDef def = instantiate("bicons_r3", {});
  VerifyOptions o1;
  o1.counts = 33;
  o1.jobs = 1;
  VerifyOptions o4 = o1;
  o4.jobs = 4;
  CHECK(report_scalar_defect(verify_surface(def, o1), verify_surface(def, o4)) ==
        0.0);
}

TEST_CASE("refinement sharpens true identities and preserves violations") {
  SurfaceDef def = instantiate("bicons_r3", {});
  VerifyOptions raw;
  raw.counts = 33;
  raw.richardson = false;
  VerifyOptions rich = raw;
  rich.richardson = true;
  SurfaceReport a = verify_surface(def, raw);
  SurfaceReport b = verify_surface(def, rich);

  CHECK(b.find("biconservative")->max_rel < 0.2 * a.find("biconservative")->max_rel);
  // A genuine violation is not extrapolated away.
  const double va = a.find("biharmonic_normal")->max_rel;
  const double vb = b.find("biharmonic_normal")->max_rel;
  CHECK(vb > 0.5 * va);
  CHECK(vb < 2.0 * va);
}
