// Normal field construction, second fundamental form, shape operator,
// principal curvatures, and conformal holomorphicity residual.
#include "spaceform/shape.hpp"

#include <Eigen/Dense>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "spaceform/common.hpp"

namespace spaceform {

namespace {

// Unit normal at one node: Gram-Schmidt against the model position (curved
// cases) and the tangent frame, seeded by the standard basis vector with the
// largest rejection (first index wins ties). Returns false when every seed
// degenerates.
bool node_normal(const AmbientSpace& amb, const double* p, const double t[3][5],
                 int m, double* eta) {
  const int n = amb.coords;
  double u[3][5];
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < n; ++a) u[i][a] = t[i][a];
    for (int j = 0; j < i; ++j) {
      const double d = ambient_inner(amb, u[i], u[j]);
      for (int a = 0; a < n; ++a) u[i][a] -= d * u[j][a];
    }
    const double n2 = ambient_inner(amb, u[i], u[i]);
    if (!(n2 > 0.0)) return false;
    const double inv = 1.0 / std::sqrt(n2);
    for (int a = 0; a < n; ++a) u[i][a] *= inv;
  }
  auto reject = [&](int seed, double* w) {
    for (int a = 0; a < n; ++a) w[a] = (a == seed) ? 1.0 : 0.0;
    if (amb.curvature != 0) {
      const double wp = ambient_inner(amb, w, p);
      const double coeff = amb.curvature * wp;
      for (int a = 0; a < n; ++a) w[a] -= coeff * p[a];
    }
    for (int j = 0; j < m; ++j) {
      const double d = ambient_inner(amb, w, u[j]);
      for (int a = 0; a < n; ++a) w[a] -= d * u[j][a];
    }
    return ambient_inner(amb, w, w);
  };
  int best = -1;
  double best_r2 = 0.0;
  double w[5];
  for (int seed = 0; seed < n; ++seed) {
    const double r2 = reject(seed, w);
    if (r2 > best_r2) {
      best_r2 = r2;
      best = seed;
    }
  }
  if (best < 0 || best_r2 < 1e-20) return false;
  reject(best, w);
  // one re-orthogonalization pass tightens the projection to roundoff
  if (amb.curvature != 0) {
    const double wp = ambient_inner(amb, w, p);
    const double coeff = amb.curvature * wp;
    for (int a = 0; a < n; ++a) w[a] -= coeff * p[a];
  }
  for (int j = 0; j < m; ++j) {
    const double d = ambient_inner(amb, w, u[j]);
    for (int a = 0; a < n; ++a) w[a] -= d * u[j][a];
  }
  const double n2 = ambient_inner(amb, w, w);
  if (!(n2 > 0.0)) return false;
  const double inv = 1.0 / std::sqrt(n2);
  for (int a = 0; a < n; ++a) eta[a] = w[a] * inv;
  return true;
}

void eigen_descending(int m, const double* g, const double* b, const double* a,
                      double* lam) {
  if (m == 1) {
    lam[0] = a[0];
    return;
  }
  if (m == 2) {
    const double tr = a[0] + a[3];
    const double det = a[0] * a[3] - a[1] * a[2];
    const double half = 0.5 * tr;
    const double disc = half * half - det;
    const double s = std::sqrt(disc > 0.0 ? disc : 0.0);
    lam[0] = half + s;
    lam[1] = half - s;
    return;
  }
  Eigen::Matrix3d G, B;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      G(i, j) = g[i * 3 + j];
      B(i, j) = b[i * 3 + j];
    }
  }
  Eigen::LLT<Eigen::Matrix3d> llt(G);
  Eigen::Matrix3d L = llt.matrixL();
  Eigen::Matrix3d Linv = L.inverse();
  Eigen::Matrix3d M = Linv * B * Linv.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es;
  es.compute(0.5 * (M + M.transpose()));
  for (int i = 0; i < 3; ++i) lam[i] = es.eigenvalues()(2 - i);
}

}  // namespace

ShapeFields build_shape(const AmbientSpace& amb, const ChartJets& jets,
                        const MetricFields& mf, bool flip_orientation,
                        int jobs) {
  const Lattice& lat = jets.X.lattice();
  const int m = jets.m;
  const int n = jets.n;

  // common valid box of the second-derivative jets and the metric data
  std::array<int, 3> box{0, 0, 0};
  for (int d = 0; d < lat.dim(); ++d) {
    int g = std::min(mf.ginv.guard(d), jets.X.guard(d));
    for (const Field& fld : jets.dX) g = std::min(g, fld.guard(d));
    for (const Field& fld : jets.d2Xp) g = std::min(g, fld.guard(d));
    box[static_cast<std::size_t>(d)] = g;
  }

  ShapeFields sf{1,          Field(lat, n),     Field(lat, m * m),
                 Field(lat, m * m), Field(lat, 1), Field(lat, 1),
                 Field(lat, m)};

  std::atomic<bool> bad{false};
  for_each_box(lat, box, jobs, [&](std::size_t flat, const int*) {
    double p[5], t[3][5], eta[5];
    for (int a = 0; a < n; ++a) p[a] = jets.X.comp(a)[flat];
    for (int i = 0; i < m; ++i) {
      for (int a = 0; a < n; ++a) {
        t[i][a] = jets.dX[static_cast<std::size_t>(i)].comp(a)[flat];
      }
    }
    if (!node_normal(amb, p, t, m, eta)) {
      bad.store(true, std::memory_order_relaxed);
      return;
    }
    for (int a = 0; a < n; ++a) sf.normal.comp(a)[flat] = eta[a];
  });
  if (bad.load()) {
    throw NumericalError("degenerate tangent frame: unit normal is undefined");
  }

  // serial continuity sweep (deterministic row-major order), then halo sync
  {
    int lo[3] = {0, 0, 0}, hi[3] = {1, 1, 1};
    for (int d = 0; d < lat.dim(); ++d) {
      const bool per = lat.axis(d).periodic;
      lo[d] = per ? 0 : -box[static_cast<std::size_t>(d)];
      hi[d] = lat.unique_count(d) + (per ? 0 : box[static_cast<std::size_t>(d)]);
    }
    for (int i = lo[0]; i < hi[0]; ++i) {
      for (int j = lo[1]; j < hi[1]; ++j) {
        for (int k = lo[2]; k < hi[2]; ++k) {
          int idx[3] = {i, j, k};
          int ref[3] = {i, j, k};
          if (lat.dim() >= 3 && k > lo[2]) {
            ref[2] = k - 1;
          } else if (lat.dim() >= 2 && j > lo[1]) {
            ref[1] = j - 1;
          } else if (i > lo[0]) {
            ref[0] = i - 1;
          } else {
            continue;  // first node keeps its raw sign
          }
          const std::size_t cur = lat.flat(idx);
          const std::size_t prv = lat.flat(ref);
          double dcur[5], dprv[5];
          for (int a = 0; a < n; ++a) {
            dcur[a] = sf.normal.comp(a)[cur];
            dprv[a] = sf.normal.comp(a)[prv];
          }
          if (ambient_inner(amb, dcur, dprv) < 0.0) {
            for (int a = 0; a < n; ++a) sf.normal.comp(a)[cur] = -dcur[a];
          }
        }
      }
    }
    for (int d = 0; d < lat.dim(); ++d) {
      sf.normal.set_guard(d, box[static_cast<std::size_t>(d)]);
    }
    sync_periodic_halos(sf.normal);
    for (int d = 0; d < lat.dim(); ++d) {
      sf.normal.set_guard(d, box[static_cast<std::size_t>(d)]);
    }
  }

  // orientation convention: mean curvature at the central base node is >= 0
  {
    int base[3] = {0, 0, 0};
    for (int d = 0; d < lat.dim(); ++d) base[d] = lat.unique_count(d) / 2;
    const std::size_t flat = lat.flat(base);
    double eta[5];
    for (int a = 0; a < n; ++a) eta[a] = sf.normal.comp(a)[flat];
    double fbase = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double dd[5];
        for (int a = 0; a < n; ++a) dd[a] = jets.d2(i, j).comp(a)[flat];
        fbase += mf.ginv.comp(i * m + j)[flat] * ambient_inner(amb, dd, eta);
      }
    }
    int sign = (fbase < 0.0) ? -1 : 1;
    if (flip_orientation) sign = -sign;
    sf.orientation = sign;
    if (sign < 0) {
      for (int a = 0; a < n; ++a) {
        double* c = sf.normal.comp(a);
        for (std::size_t s = 0; s < lat.total(); ++s) c[s] = -c[s];
      }
    }
  }

  for_each_box(lat, box, jobs, [&](std::size_t flat, const int*) {
    double eta[5];
    for (int a = 0; a < n; ++a) eta[a] = sf.normal.comp(a)[flat];
    double b[9], aop[9], gm[9], gi[9];
    for (int c = 0; c < m * m; ++c) {
      gm[c] = mf.g.comp(c)[flat];
      gi[c] = mf.ginv.comp(c)[flat];
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double dd[5];
        for (int a = 0; a < n; ++a) dd[a] = jets.d2(i, j).comp(a)[flat];
        b[i * m + j] = ambient_inner(amb, dd, eta);
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += gi[i * m + k] * b[k * m + j];
        aop[i * m + j] = s;
      }
    }
    double tr = 0.0, a2 = 0.0;
    for (int i = 0; i < m; ++i) tr += aop[i * m + i];
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) a2 += aop[i * m + j] * aop[j * m + i];
    }
    double lam[3] = {0, 0, 0};
    eigen_descending(m, gm, b, aop, lam);
    for (int c = 0; c < m * m; ++c) {
      sf.B.comp(c)[flat] = b[c];
      sf.A.comp(c)[flat] = aop[c];
    }
    sf.f.comp(0)[flat] = tr / m;
    sf.A2.comp(0)[flat] = a2;
    for (int i = 0; i < m; ++i) sf.lambda.comp(i)[flat] = lam[i];
  });
  for (Field* fld : {&sf.B, &sf.A, &sf.f, &sf.A2, &sf.lambda}) {
    for (int d = 0; d < lat.dim(); ++d) {
      fld->set_guard(d, box[static_cast<std::size_t>(d)]);
    }
  }
  return sf;
}

ProbeFrame probe_frame(const AmbientSpace& amb, const Jet2& jet,
                       const double* align_normal) {
  const int m = jet.m;
  const int n = jet.n;
  ProbeFrame pf;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      pf.g[i * m + j] = ambient_inner(amb, jet.d1[i], jet.d1[j]);
    }
  }
  pf.detg = invert_sym(m, pf.g, pf.ginv);
  if (!(pf.detg > 0.0)) {
    throw NumericalError("degenerate metric at probe point");
  }
  if (!node_normal(amb, jet.pos, jet.d1, m, pf.normal)) {
    throw NumericalError("degenerate tangent frame at probe point");
  }
  auto assemble = [&]() {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        pf.b[i * m + j] = ambient_inner(amb, jet.d2[i][j], pf.normal);
      }
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += pf.ginv[i * m + k] * pf.b[k * m + j];
        pf.a[i * m + j] = s;
      }
    }
    pf.f = 0.0;
    for (int i = 0; i < m; ++i) pf.f += pf.a[i * m + i];
    pf.f /= m;
    pf.a2 = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) pf.a2 += pf.a[i * m + j] * pf.a[j * m + i];
    }
  };
  assemble();
  bool flip = false;
  if (align_normal != nullptr) {
    flip = ambient_inner(amb, pf.normal, align_normal) < 0.0;
  } else {
    flip = pf.f < 0.0;
  }
  if (flip) {
    for (int a = 0; a < n; ++a) pf.normal[a] = -pf.normal[a];
    assemble();
  }
  return pf;
}

ConformalFields build_conformal(const MetricFields& mf, const ShapeFields& sf,
                                int jobs) {
  if (mf.m != 2) {
    throw std::logic_error("conformal data requires a 2-dimensional chart");
  }
  const Lattice& lat = mf.g.lattice();
  std::array<int, 3> box{0, 0, 0};
  for (int d = 0; d < lat.dim(); ++d) {
    box[static_cast<std::size_t>(d)] = std::min(
        {mf.g.guard(d), sf.A.guard(d), sf.f.guard(d)});
  }
  ConformalFields cf{Field(lat, 1), Field(lat, 1), Field(lat, 2), Field(lat, 1)};
  for_each_box(lat, box, jobs, [&](std::size_t flat, const int*) {
    const double g00 = mf.g.comp(0)[flat];
    const double g01 = mf.g.comp(1)[flat];
    const double g11 = mf.g.comp(3)[flat];
    const double factor = 0.5 * (g00 + g11);
    cf.factor.comp(0)[flat] = factor;
    cf.isothermal_dev.comp(0)[flat] =
        std::max(std::abs(g00 - g11), 2.0 * std::abs(g01)) / (g00 + g11);
    const double fmean = sf.f.comp(0)[flat];
    const double a00 = sf.A.comp(0)[flat];
    const double a01 = sf.A.comp(1)[flat];
    const double a10 = sf.A.comp(2)[flat];
    const double a11 = sf.A.comp(3)[flat];
    const double coeff = factor * fmean / 4.0;
    cf.phi.comp(0)[flat] = coeff * (a00 - a11);
    cf.phi.comp(1)[flat] = -coeff * (a01 + a10);
  });
  for (Field* fld : {&cf.factor, &cf.isothermal_dev, &cf.phi}) {
    for (int d = 0; d < lat.dim(); ++d) {
      fld->set_guard(d, box[static_cast<std::size_t>(d)]);
    }
  }
  Field dpu = deriv(cf.phi, 0);
  Field dpv = deriv(cf.phi, 1);
  std::array<int, 3> cbox{0, 0, 0};
  for (int d = 0; d < lat.dim(); ++d) {
    cbox[static_cast<std::size_t>(d)] = std::min(dpu.guard(d), dpv.guard(d));
  }
  for_each_box(lat, cbox, jobs, [&](std::size_t flat, const int*) {
    const double pu = dpu.comp(0)[flat], qu = dpu.comp(1)[flat];
    const double pv = dpv.comp(0)[flat], qv = dpv.comp(1)[flat];
    const double r1 = pu - qv;
    const double r2 = qu + pv;
    cf.cr_residual.comp(0)[flat] = 0.5 * std::sqrt(r1 * r1 + r2 * r2);
  });
  for (int d = 0; d < lat.dim(); ++d) {
    cf.cr_residual.set_guard(d, cbox[static_cast<std::size_t>(d)]);
  }
  return cf;
}

}  // namespace spaceform
