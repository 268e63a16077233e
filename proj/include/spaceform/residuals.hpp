// Nodewise residual evaluation of every hypersurface equation/identity the
// engine checks, aggregation into a report, and verdict evaluation against
// per-surface claims.
//
// Entry naming: each entry is the pointwise residual of one equation,
// identity, or inequality margin; "max_rel" is max_abs divided by the entry
// scale, scale = max(1, interior max magnitude of the equation's largest
// constituent term). Verdicts gate on max_rel unless a claim asks for the
// absolute value.
//
// Richardson mode evaluates every entry on the requested grid and on its 2x
// refinement, then extrapolates the order-4 stencil error away; residuals of
// true identities drop to the h^6 floor while genuine violations (negative
// controls) are preserved.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spaceform/ambient.hpp"
#include "spaceform/calculus.hpp"
#include "spaceform/grid.hpp"
#include "spaceform/shape.hpp"

namespace spaceform {

enum class ClaimKind {
  kResidualMax,    // entry residual must stay at or below tol
  kResidualFloor,  // entry residual must reach tol (rejects non-examples)
  kValueNear,      // |value - expect| <= tol
  kValueAbove,     // value > tol
  kGapMembership,  // measured |f| lies in {1} (m=2) or (0,(m-2)/m] U {1}
};

// Side conditions; when unmet the verdict is "skipped", never a silent pass.
enum class ClaimGuard {
  kNone,
  kBiconservative,       // biconservative entry within the internal gate
  kCmc,                  // mean curvature constant on the grid
  kNonCmc,               // mean curvature genuinely varying
  kCmcProperBiharmonic,  // CMC, non-minimal, biharmonic entries passing
};

struct Claim {
  std::string name;         // verdict label
  ClaimKind kind = ClaimKind::kResidualMax;
  std::string target;       // entry name or value name the claim reads
  double tol = 0.0;
  double expect = 0.0;      // kValueNear only
  bool use_abs = false;     // gate max_abs instead of max_rel
  ClaimGuard guard = ClaimGuard::kNone;
};

// A chart-immersed hypersurface plus the facts it is expected to satisfy.
struct SurfaceDef {
  std::string id;
  AmbientSpace amb;
  std::vector<AxisSpec> axes;
  ChartFn chart;
  bool isothermal = false;  // enables the conformal/holomorphicity entries
  std::vector<std::pair<std::string, double>> params;
  std::vector<Claim> claims;
  // Optional closed forms evaluated at chart coordinates.
  std::function<void(const double* x, double* g)> metric_exact;  // m*m comps
  std::function<double(const double* x)> gauss_exact;            // m == 2
};

struct EntryStats {
  std::string name;
  double max_abs = 0.0;
  double max_rel = 0.0;
  double l2_mean = 0.0;
  double scale = 1.0;
  std::array<double, 3> worst_node{0.0, 0.0, 0.0};  // chart coordinates
  std::size_t n = 0;                                // nodes after masking
};

struct Verdict {
  std::string claim;
  std::string status;  // "pass" | "fail" | "skipped"
  double observed = 0.0;
  double tolerance = 0.0;
  std::string reason;
};

struct SurfaceReport {
  std::string surface_id;
  std::vector<std::pair<std::string, double>> params;
  std::vector<std::string> grid;  // one human-readable line per axis
  std::vector<EntryStats> entries;
  std::vector<std::pair<std::string, double>> values;  // probed scalars
  std::vector<Verdict> verdicts;
  std::string notes;

  bool all_pass() const;
  const EntryStats* find(const std::string& entry) const;
  // NaN when the value is absent.
  double value(const std::string& name) const;
};

struct VerifyOptions {
  bool richardson = true;
  int jobs = 1;
  double probe_h = 5e-3;
  bool flip_orientation = false;
  std::optional<int> counts;         // override every axis count
  std::optional<Isometry> isometry;  // verify the transformed chart
};

SurfaceReport verify_surface(const SurfaceDef& def, const VerifyOptions& opt);

// Largest absolute difference between the numeric scalars of two reports
// (entry statistics and probed values); +inf on structural mismatch. Used by
// the orientation/isometry invariance suite.
double report_scalar_defect(const SurfaceReport& a, const SurfaceReport& b);

}  // namespace spaceform
