// Command-line driver: list the construction catalog, verify a construction
// against its claims on a chart grid, integrate the rotational profile
// equation, or export chart samples.
//
// Exit codes: 0 success (verify: all claims pass), 1 claim failure,
// 2 invalid input, 3 numerical failure.
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spaceform/catalog.hpp"
#include "spaceform/common.hpp"
#include "spaceform/profile_ode.hpp"
#include "spaceform/report_io.hpp"
#include "spaceform/residuals.hpp"

namespace {

using spaceform::InputError;

// Surface parameter flags; forwarded to instantiate() only when given.
struct ParamFlags {
  std::map<std::string, double> vals;
  std::vector<std::pair<std::string, CLI::Option*>> opts;

  void add_to(CLI::App* cmd) {
    static const struct {
      const char* flag;
      const char* help;
    } kParams[] = {
        {"m", "hypersurface dimension (small_hypersphere)"},
        {"r", "radius parameter (small_hypersphere, round_sphere_r3)"},
        {"m1", "first factor dimension (products)"},
        {"m2", "second factor dimension (products)"},
        {"r1", "first factor radius (product_general)"},
        {"alpha", "cone slope parameter (cone_r3, cone_s3)"},
        {"C0", "scale parameter (bicons_r3)"},
        {"c1", "profile integration constant (bicons_s3)"},
        {"t", "geodesic radius (distance_sphere_h3)"},
        {"eps", "perturbation size (clifford_perturbed)"},
    };
    for (const auto& p : kParams) {
      CLI::Option* o = cmd->add_option(std::string("--") + p.flag,
                                       vals[p.flag], p.help);
      opts.emplace_back(p.flag, o);
    }
  }

  std::map<std::string, double> given() const {
    std::map<std::string, double> out;
    for (const auto& po : opts) {
      if (po.second->count() > 0) out[po.first] = vals.at(po.first);
    }
    return out;
  }
};

void emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body;
  } else {
    spaceform::write_file_atomic(out_path, body);
  }
}

spaceform::VerifyOptions build_options(int jobs, int counts, bool no_richardson,
                                       bool flip, double probe_h,
                                       long long isometry_seed,
                                       const std::string& isometry_kind,
                                       const spaceform::AmbientSpace& amb) {
  spaceform::VerifyOptions opt;
  opt.richardson = !no_richardson;
  opt.jobs = jobs;
  opt.probe_h = probe_h;
  opt.flip_orientation = flip;
  if (counts > 0) opt.counts = counts;
  if (isometry_seed >= 0) {
    const auto seed = static_cast<std::uint64_t>(isometry_seed);
    if (isometry_kind == "signed") {
      opt.isometry = spaceform::random_signed_permutation(amb, seed);
    } else if (isometry_kind == "generic") {
      opt.isometry = spaceform::random_generic_isometry(amb, seed);
    } else {
      throw InputError("isometry kind must be 'signed' or 'generic'");
    }
  }
  return opt;
}

int run(int argc, char** argv) {
  CLI::App app{
      "spaceform: construct explicit hypersurfaces of the three model "
      "geometries and verify their curvature identities on chart grids"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string out_path;

  // --- list ---------------------------------------------------------------
  CLI::App* list = app.add_subcommand("list", "list the construction catalog");
  std::string list_format = "text";
  std::string list_out;
  list->add_option("--format", list_format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  list->add_option("--out", list_out, "write output to this file");

  // --- verify -------------------------------------------------------------
  CLI::App* verify =
      app.add_subcommand("verify", "evaluate every claim of one construction");
  std::string v_id;
  verify->add_option("surface", v_id, "catalog id (see 'list')")->required();
  ParamFlags v_params;
  v_params.add_to(verify);
  int v_jobs = 1;
  int v_counts = 0;
  bool v_norich = false;
  bool v_flip = false;
  double v_probe_h = 5e-3;
  long long v_iso_seed = -1;
  std::string v_iso_kind = "signed";
  double v_tol_scale = 1.0;
  verify->add_option("--jobs", v_jobs, "worker threads")->check(CLI::Range(1, 64));
  verify->add_option("--counts", v_counts,
                     "override the node count of every axis");
  verify->add_flag("--no-richardson", v_norich,
                   "single-grid statistics (skip the 2x refinement)");
  verify->add_flag("--flip-orientation", v_flip, "reverse the unit normal");
  verify->add_option("--probe-h", v_probe_h, "step for midpoint spot checks");
  verify->add_option("--isometry-seed", v_iso_seed,
                     "verify the chart composed with a random ambient isometry");
  verify->add_option("--isometry-kind", v_iso_kind,
                     "isometry family: signed (exact permutation) or generic")
      ->check(CLI::IsMember({"signed", "generic"}));
  verify->add_option("--tol-scale", v_tol_scale,
                     "multiply every claim tolerance (exploration aid)");
  verify->add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out_path, "write the report to this file");

  // --- ode ----------------------------------------------------------------
  CLI::App* ode = app.add_subcommand(
      "ode", "integrate the rotational profile curvature equation");
  double o_c1 = 0.0;
  double o_tol = 1e-10;
  int o_periods = 1;
  bool o_verify = false;
  std::string o_csv;
  std::string o_out;
  ode->add_option("--c1", o_c1, "integration constant (> 64/3^(5/4))")
      ->required();
  ode->add_option("--tol", o_tol, "adaptive step tolerance");
  ode->add_option("--periods", o_periods, "number of profile periods");
  ode->add_option("--csv", o_csv, "write sampled rows as CSV to this file");
  ode->add_option("--out", o_out, "write the JSON summary to this file");
  ode->add_flag("--verify", o_verify,
                "afterwards assemble the surface and evaluate its claims");

  // --- export -------------------------------------------------------------
  CLI::App* exp = app.add_subcommand(
      "export", "sample the chart of one construction as CSV");
  std::string e_id;
  exp->add_option("surface", e_id, "catalog id (see 'list')")->required();
  ParamFlags e_params;
  e_params.add_to(exp);
  int e_counts = 0;
  bool e_scalars = false;
  double e_probe_h = 5e-3;
  std::string e_out;
  exp->add_option("--counts", e_counts, "override the node count of every axis");
  exp->add_flag("--with-scalars", e_scalars,
                "append mean curvature (and intrinsic curvature when m = 2)");
  exp->add_option("--probe-h", e_probe_h, "step for the scalar spot checks");
  exp->add_option("--out", e_out, "write the CSV to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (app.got_subcommand(list)) {
    emit(list_format == "json" ? spaceform::catalog_to_json()
                               : spaceform::catalog_to_text(),
         list_out);
    return 0;
  }

  if (app.got_subcommand(verify)) {
    spaceform::SurfaceDef def = spaceform::instantiate(v_id, v_params.given());
    if (v_tol_scale != 1.0) {
      if (!(v_tol_scale > 0.0)) throw InputError("--tol-scale must be positive");
      for (spaceform::Claim& c : def.claims) c.tol *= v_tol_scale;
    }
    const spaceform::VerifyOptions opt =
        build_options(v_jobs, v_counts, v_norich, v_flip, v_probe_h, v_iso_seed,
                      v_iso_kind, def.amb);
    const spaceform::SurfaceReport rep = spaceform::verify_surface(def, opt);
    emit(format == "json" ? spaceform::report_to_json(rep)
                          : spaceform::report_to_text(rep),
         out_path);
    return rep.all_pass() ? 0 : 1;
  }

  if (app.got_subcommand(ode)) {
    const spaceform::ProfileSolution sol =
        spaceform::integrate_profile(o_c1, o_tol, o_periods);
    if (!o_csv.empty()) {
      spaceform::write_file_atomic(o_csv, spaceform::profile_to_csv(sol));
    }
    emit(spaceform::profile_summary_json(sol), o_out);
    if (o_verify) {
      spaceform::SurfaceDef def =
          spaceform::instantiate("bicons_s3", {{"c1", o_c1}});
      const spaceform::SurfaceReport rep =
          spaceform::verify_surface(def, spaceform::VerifyOptions{});
      std::cout << spaceform::report_to_text(rep);
      return rep.all_pass() ? 0 : 1;
    }
    return 0;
  }

  if (app.got_subcommand(exp)) {
    const spaceform::SurfaceDef def = spaceform::instantiate(e_id, e_params.given());
    emit(spaceform::chart_to_csv(def, e_counts, e_scalars, e_probe_h), e_out);
    return 0;
  }

  throw InputError("no subcommand selected");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const spaceform::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
