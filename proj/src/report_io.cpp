#include "spaceform/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spaceform/common.hpp"
#include "spaceform/shape.hpp"

namespace spaceform {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

ordered_json params_object(const std::vector<std::pair<std::string, double>>& kv) {
  ordered_json o = ordered_json::object();
  for (const auto& p : kv) o[p.first] = p.second;
  return o;
}

}  // namespace

std::string report_to_json(const SurfaceReport& rep) {
  ordered_json j;
  j["schema"] = "1";
  j["surface"] = rep.surface_id;
  j["params"] = params_object(rep.params);
  j["grid"] = rep.grid;
  const std::size_t dim = rep.grid.size();
  ordered_json entries = ordered_json::array();
  for (const EntryStats& e : rep.entries) {
    ordered_json o;
    o["name"] = e.name;
    o["max_abs"] = e.max_abs;
    o["max_rel"] = e.max_rel;
    o["l2_mean"] = e.l2_mean;
    o["scale"] = e.scale;
    ordered_json wn = ordered_json::array();
    for (std::size_t d = 0; d < dim && d < 3; ++d) wn.push_back(e.worst_node[d]);
    o["worst_node"] = wn;
    o["nodes"] = e.n;
    entries.push_back(o);
  }
  j["entries"] = entries;
  j["values"] = params_object(rep.values);
  ordered_json verdicts = ordered_json::array();
  for (const Verdict& v : rep.verdicts) {
    ordered_json o;
    o["claim"] = v.claim;
    o["status"] = v.status;
    o["observed"] = v.observed;
    o["tolerance"] = v.tolerance;
    o["reason"] = v.reason;
    verdicts.push_back(o);
  }
  j["verdicts"] = verdicts;
  j["notes"] = rep.notes;
  j["all_pass"] = rep.all_pass();
  return j.dump(2) + "\n";
}

std::string report_to_text(const SurfaceReport& rep) {
  std::ostringstream os;
  os << "surface: " << rep.surface_id << "\n";
  os << "params:";
  for (const auto& p : rep.params) os << ' ' << p.first << '=' << format_g17(p.second);
  os << "\n";
  for (const std::string& g : rep.grid) os << "grid: " << g << "\n";
  os << "\nentries (residual statistics; rel = max_abs / scale):\n";
  char buf[256];
  for (const EntryStats& e : rep.entries) {
    std::snprintf(buf, sizeof(buf),
                  "  %-32s max_abs %10.3e  rel %10.3e  rms %10.3e  scale %10.3e"
                  "  nodes %zu\n",
                  e.name.c_str(), e.max_abs, e.max_rel, e.l2_mean, e.scale, e.n);
    os << buf;
  }
  os << "\nvalues:\n";
  for (const auto& p : rep.values) {
    os << "  " << p.first << " = " << format_g17(p.second) << "\n";
  }
  os << "\nverdicts:\n";
  for (const Verdict& v : rep.verdicts) {
    const char* tag = v.status == "pass"    ? "PASS"
                      : v.status == "fail"  ? "FAIL"
                                            : "SKIP";
    std::snprintf(buf, sizeof(buf), "  [%s] %-28s observed %10.3e  tol %10.3e",
                  tag, v.claim.c_str(), v.observed, v.tolerance);
    os << buf;
    if (!v.reason.empty()) os << "  (" << v.reason << ")";
    os << "\n";
  }
  if (!rep.notes.empty()) os << "\nnotes: " << rep.notes << "\n";
  os << "\noverall: " << (rep.all_pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string catalog_to_json() {
  ordered_json arr = ordered_json::array();
  for (const CatalogEntry& e : catalog()) {
    ordered_json o;
    o["id"] = e.id;
    o["summary"] = e.summary;
    o["defaults"] = params_object(e.defaults);
    o["negative_control"] = e.negative_control;
    arr.push_back(o);
  }
  ordered_json j;
  j["schema"] = "1";
  j["surfaces"] = arr;
  return j.dump(2) + "\n";
}

std::string catalog_to_text() {
  std::ostringstream os;
  for (const CatalogEntry& e : catalog()) {
    os << e.id;
    if (e.negative_control) os << "  [negative control]";
    os << "\n  " << e.summary << "\n  defaults:";
    for (const auto& p : e.defaults) os << ' ' << p.first << '=' << format_g17(p.second);
    os << "\n";
  }
  return os.str();
}

std::string profile_to_csv(const ProfileSolution& sol) {
  std::ostringstream os;
  os << "u,kappa,kappa_prime,drift,sigma1,sigma2,sigma3,sigma4\n";
  for (const ProfileRow& r : sol.rows) {
    os << fmt("%.17g", r.u) << ',' << fmt("%.17g", r.kappa) << ','
       << fmt("%.17g", r.kappa_prime) << ',' << fmt("%.17g", r.drift);
    for (int i = 0; i < 4; ++i) os << ',' << fmt("%.17g", r.sigma[i]);
    os << '\n';
  }
  return os.str();
}

std::string profile_summary_json(const ProfileSolution& sol) {
  ordered_json j;
  j["schema"] = "1";
  j["c1"] = sol.c1;
  j["tol"] = sol.tol;
  j["period"] = sol.period;
  j["period_spread"] = sol.period_spread;
  j["kappa_band"] = {sol.kappa_min_root, sol.kappa_max_root};
  j["kappa_observed"] = {sol.kappa_obs_min, sol.kappa_obs_max};
  j["max_drift"] = sol.max_drift;
  j["constraint_residual_max"] = sol.constraint_residual_max;
  j["rows"] = sol.rows.size();
  return j.dump(2) + "\n";
}

std::string chart_to_csv(const SurfaceDef& def, int counts_override,
                         bool with_scalars, double probe_h) {
  std::vector<AxisSpec> axes = def.axes;
  if (counts_override > 0) {
    for (AxisSpec& a : axes) a.count = counts_override;
  }
  const Lattice lat(axes);
  const int m = def.amb.m;
  const int nco = def.amb.coords;
  const bool emit_gauss = with_scalars && m == 2;

  std::ostringstream os;
  for (int d = 0; d < lat.dim(); ++d) {
    if (d) os << ',';
    os << lat.axis(d).name;
  }
  for (int a = 0; a < nco; ++a) os << ",x" << (a + 1);
  if (with_scalars) os << ",f";
  if (emit_gauss) os << ",K";
  os << '\n';

  std::array<int, 3> nu{1, 1, 1};
  for (int d = 0; d < lat.dim(); ++d) nu[static_cast<std::size_t>(d)] = lat.unique_count(d);
  double x[3] = {0.0, 0.0, 0.0};
  double pos[5] = {0.0, 0.0, 0.0, 0.0, 0.0};
  for (int i0 = 0; i0 < nu[0]; ++i0) {
    for (int i1 = 0; i1 < nu[1]; ++i1) {
      for (int i2 = 0; i2 < nu[2]; ++i2) {
        const int idx[3] = {i0, i1, i2};
        for (int d = 0; d < lat.dim(); ++d) x[d] = lat.coord(d, idx[d]);
        for (int d = 0; d < lat.dim(); ++d) {
          if (d) os << ',';
          os << fmt("%.17g", x[d]);
        }
        def.chart(x, pos);
        for (int a = 0; a < nco; ++a) os << ',' << fmt("%.17g", pos[a]);
        if (with_scalars) {
          const Jet2 jet = probe_jet(def.chart, m, nco, x, probe_h);
          const ProbeFrame fr = probe_frame(def.amb, jet);
          os << ',' << fmt("%.17g", fr.f);
          if (emit_gauss) {
            const double det_a = fr.a[0] * fr.a[3] - fr.a[1] * fr.a[2];
            os << ',' << fmt("%.17g", det_a + def.amb.curvature);
          }
        }
        os << '\n';
      }
    }
  }
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open '" + tmp + "' for writing");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw InputError("failed while writing '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw InputError("cannot move temporary file onto '" + path + "'");
  }
}

}  // namespace spaceform
