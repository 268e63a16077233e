// Probe jets, induced metric data, and the grid differential operators.
#include "spaceform/calculus.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "spaceform/common.hpp"

namespace spaceform {

namespace {

constexpr double kD1[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
constexpr double kD2[5] = {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12};

int sym_index(int i, int j, int m) {
  if (i > j) std::swap(i, j);
  return i * m - i * (i + 1) / 2 + j;
}

std::array<int, 3> min_guard_box(const Lattice& lat,
                                 std::initializer_list<const Field*> fs) {
  std::array<int, 3> g{0, 0, 0};
  for (int d = 0; d < lat.dim(); ++d) {
    int mg = kPad;
    for (const Field* f : fs) mg = std::min(mg, f->guard(d));
    g[static_cast<std::size_t>(d)] = mg;
  }
  return g;
}

void set_guards(Field& f, const std::array<int, 3>& g) {
  for (int d = 0; d < f.lattice().dim(); ++d) {
    f.set_guard(d, g[static_cast<std::size_t>(d)]);
  }
}

}  // namespace

Jet2 probe_jet(const ChartFn& chart, int m, int n, const double* x0, double h) {
  if (m < 1 || m > 3 || n < 1 || n > 5) {
    throw std::logic_error("probe_jet supports m in 1..3, n in 1..5");
  }
  Jet2 jet;
  jet.m = m;
  jet.n = n;
  int len[3] = {5, m > 1 ? 5 : 1, m > 2 ? 5 : 1};
  std::vector<double> block(static_cast<std::size_t>(len[0]) * len[1] * len[2] * n);
  auto slot = [&](int k0, int k1, int k2) {
    return block.data() +
           static_cast<std::size_t>(((k0 * len[1]) + k1) * len[2] + k2) * n;
  };
  for (int k0 = 0; k0 < len[0]; ++k0) {
    for (int k1 = 0; k1 < len[1]; ++k1) {
      for (int k2 = 0; k2 < len[2]; ++k2) {
        double x[3] = {x0[0] + (k0 - 2) * h,
                       m > 1 ? x0[1] + (k1 - 2) * h : 0.0,
                       m > 2 ? x0[2] + (k2 - 2) * h : 0.0};
        chart(x, slot(k0, k1, k2));
      }
    }
  }
  int c[3] = {2, m > 1 ? 2 : 0, m > 2 ? 2 : 0};
  const double* center = slot(c[0], c[1], c[2]);
  for (int a = 0; a < n; ++a) jet.pos[a] = center[a];

  auto line = [&](int axis, int k) {
    int kk[3] = {c[0], c[1], c[2]};
    kk[axis] = k;
    return slot(kk[0], kk[1], kk[2]);
  };
  for (int i = 0; i < m; ++i) {
    for (int a = 0; a < n; ++a) {
      double s1 = 0.0, s2 = 0.0;
      for (int k = 0; k < 5; ++k) {
        const double v = line(i, k)[a];
        s1 += kD1[k] * v;
        s2 += kD2[k] * v;
      }
      jet.d1[i][a] = s1 / h;
      jet.d2[i][i][a] = s2 / (h * h);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int k = 0; k < 5; ++k) {
          for (int l = 0; l < 5; ++l) {
            int kk[3] = {c[0], c[1], c[2]};
            kk[i] = k;
            kk[j] = l;
            s += kD1[k] * kD1[l] * slot(kk[0], kk[1], kk[2])[a];
          }
        }
        jet.d2[i][j][a] = s / (h * h);
        jet.d2[j][i][a] = jet.d2[i][j][a];
      }
    }
  }
  return jet;
}

double invert_sym(int m, const double* g, double* ginv) {
  if (m == 1) {
    const double det = g[0];
    ginv[0] = 1.0 / det;
    return det;
  }
  if (m == 2) {
    const double det = g[0] * g[3] - g[1] * g[2];
    const double r = 1.0 / det;
    ginv[0] = g[3] * r;
    ginv[1] = -g[1] * r;
    ginv[2] = -g[2] * r;
    ginv[3] = g[0] * r;
    return det;
  }
  const double a = g[0], b = g[1], c = g[2];
  const double d = g[4], e = g[5], f = g[8];
  // adjugate of [[a,b,c],[b,d,e],[c,e,f]]
  const double A = d * f - e * e;
  const double B = c * e - b * f;
  const double C = b * e - c * d;
  const double det = a * A + b * B + c * C;
  const double r = 1.0 / det;
  ginv[0] = A * r;
  ginv[1] = B * r;
  ginv[2] = C * r;
  ginv[3] = B * r;
  ginv[4] = (a * f - c * c) * r;
  ginv[5] = (b * c - a * e) * r;
  ginv[6] = C * r;
  ginv[7] = (b * c - a * e) * r;
  ginv[8] = (a * d - b * b) * r;
  return det;
}

const Field& ChartJets::d2(int i, int j) const {
  return d2Xp[static_cast<std::size_t>(sym_index(i, j, m))];
}

ChartJets build_chart_jets(const Lattice& lat, const AmbientSpace& amb,
                           const ChartFn& chart, int jobs) {
  ChartJets jets{lat.dim(), amb.coords, eval_chart(lat, amb.coords, chart, jobs),
                 {}, {}};
  const int m = jets.m;
  for (int i = 0; i < m; ++i) jets.dX.push_back(deriv(jets.X, i));
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      jets.d2Xp.push_back(i == j ? deriv2(jets.X, i) : deriv(jets.dX[static_cast<std::size_t>(i)], j));
    }
  }
  return jets;
}

MetricFields build_metric(const AmbientSpace& amb, const ChartJets& jets,
                          int jobs) {
  const Lattice& lat = jets.X.lattice();
  const int m = jets.m;
  const int n = jets.n;

  std::array<int, 3> gbox{0, 0, 0};
  {
    std::initializer_list<const Field*> deps = {&jets.dX[0]};
    gbox = min_guard_box(lat, deps);
    for (int i = 1; i < m; ++i) {
      for (int d = 0; d < lat.dim(); ++d) {
        gbox[static_cast<std::size_t>(d)] =
            std::min(gbox[static_cast<std::size_t>(d)],
                     jets.dX[static_cast<std::size_t>(i)].guard(d));
      }
    }
  }

  Field g(lat, m * m);
  {
    const double* dxp[3][5];
    for (int i = 0; i < m; ++i) {
      for (int a = 0; a < n; ++a) dxp[i][a] = jets.dX[static_cast<std::size_t>(i)].comp(a);
    }
    for_each_box(lat, gbox, jobs, [&](std::size_t flat, const int*) {
      double v[3][5];
      for (int i = 0; i < m; ++i) {
        for (int a = 0; a < n; ++a) v[i][a] = dxp[i][a][flat];
      }
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          g.comp(i * m + j)[flat] = ambient_inner(amb, v[i], v[j]);
        }
      }
    });
    set_guards(g, gbox);
  }

  Field ginv(lat, m * m);
  Field detg(lat, 1);
  Field sqrtg(lat, 1);
  std::atomic<bool> degenerate{false};
  {
    for_each_box(lat, gbox, jobs, [&](std::size_t flat, const int*) {
      double gm[9] = {0}, gi[9] = {0};
      for (int c = 0; c < m * m; ++c) gm[c] = g.comp(c)[flat];
      const double det = invert_sym(m, gm, gi);
      if (!(det > 1e-100)) degenerate.store(true, std::memory_order_relaxed);
      for (int c = 0; c < m * m; ++c) ginv.comp(c)[flat] = gi[c];
      detg.comp(0)[flat] = det;
      sqrtg.comp(0)[flat] = std::sqrt(det);
    });
    if (degenerate.load()) {
      throw NumericalError("degenerate induced metric on the chart grid");
    }
    set_guards(ginv, gbox);
    set_guards(detg, gbox);
    set_guards(sqrtg, gbox);
  }

  std::vector<Field> dg;
  for (int k = 0; k < m; ++k) dg.push_back(deriv(g, k));
  std::array<int, 3> cbox = gbox;
  for (int k = 0; k < m; ++k) {
    for (int d = 0; d < lat.dim(); ++d) {
      cbox[static_cast<std::size_t>(d)] =
          std::min(cbox[static_cast<std::size_t>(d)], dg[static_cast<std::size_t>(k)].guard(d));
    }
  }
  Field gamma(lat, m * m * m);
  {
    for_each_box(lat, cbox, jobs, [&](std::size_t flat, const int*) {
      double gi[9], dgl[3][9];
      for (int c = 0; c < m * m; ++c) gi[c] = ginv.comp(c)[flat];
      for (int k = 0; k < m; ++k) {
        for (int c = 0; c < m * m; ++c) dgl[k][c] = dg[static_cast<std::size_t>(k)].comp(c)[flat];
      }
      for (int k = 0; k < m; ++k) {
        for (int i = 0; i < m; ++i) {
          for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int l = 0; l < m; ++l) {
              s += gi[k * m + l] *
                   (dgl[i][l * m + j] + dgl[j][l * m + i] - dgl[l][i * m + j]);
            }
            gamma.comp((k * m + i) * m + j)[flat] = 0.5 * s;
          }
        }
      }
    });
    set_guards(gamma, cbox);
  }

  MetricFields mf{m, std::move(g), std::move(ginv), std::move(detg),
                  std::move(sqrtg), std::move(gamma)};
  return mf;
}

Field gradient(const Field& f, const MetricFields& mf) {
  const Lattice& lat = f.lattice();
  const int m = mf.m;
  std::vector<Field> df;
  for (int i = 0; i < m; ++i) df.push_back(deriv(f, i));
  std::array<int, 3> box = min_guard_box(lat, {&mf.ginv});
  for (int i = 0; i < m; ++i) {
    for (int d = 0; d < lat.dim(); ++d) {
      box[static_cast<std::size_t>(d)] = std::min(
          box[static_cast<std::size_t>(d)], df[static_cast<std::size_t>(i)].guard(d));
    }
  }
  Field out(lat, m);
  for_each_box(lat, box, 1, [&](std::size_t flat, const int*) {
    for (int i = 0; i < m; ++i) {
      double s = 0.0;
      for (int j = 0; j < m; ++j) {
        s += mf.ginv.comp(i * m + j)[flat] * df[static_cast<std::size_t>(j)].comp(0)[flat];
      }
      out.comp(i)[flat] = s;
    }
  });
  set_guards(out, box);
  return out;
}

Field gradient_norm2(const Field& f, const MetricFields& mf) {
  const Lattice& lat = f.lattice();
  const int m = mf.m;
  std::vector<Field> df;
  for (int i = 0; i < m; ++i) df.push_back(deriv(f, i));
  std::array<int, 3> box = min_guard_box(lat, {&mf.ginv});
  for (int i = 0; i < m; ++i) {
    for (int d = 0; d < lat.dim(); ++d) {
      box[static_cast<std::size_t>(d)] = std::min(
          box[static_cast<std::size_t>(d)], df[static_cast<std::size_t>(i)].guard(d));
    }
  }
  Field out(lat, 1);
  for_each_box(lat, box, 1, [&](std::size_t flat, const int*) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        s += mf.ginv.comp(i * m + j)[flat] *
             df[static_cast<std::size_t>(i)].comp(0)[flat] *
             df[static_cast<std::size_t>(j)].comp(0)[flat];
      }
    }
    out.comp(0)[flat] = s;
  });
  set_guards(out, box);
  return out;
}

Field laplace_beltrami(const Field& f, const MetricFields& mf) {
  const Lattice& lat = f.lattice();
  const int m = mf.m;
  const int nc = f.ncomp();
  std::vector<Field> df;
  for (int i = 0; i < m; ++i) df.push_back(deriv(f, i));

  std::array<int, 3> wbox = min_guard_box(lat, {&mf.ginv, &mf.sqrtg});
  for (int i = 0; i < m; ++i) {
    for (int d = 0; d < lat.dim(); ++d) {
      wbox[static_cast<std::size_t>(d)] = std::min(
          wbox[static_cast<std::size_t>(d)], df[static_cast<std::size_t>(i)].guard(d));
    }
  }
  std::vector<Field> w;
  for (int i = 0; i < m; ++i) {
    w.emplace_back(lat, nc);
    for_each_box(lat, wbox, 1, [&](std::size_t flat, const int*) {
      const double sg = mf.sqrtg.comp(0)[flat];
      for (int c = 0; c < nc; ++c) {
        double s = 0.0;
        for (int j = 0; j < m; ++j) {
          s += mf.ginv.comp(i * m + j)[flat] * df[static_cast<std::size_t>(j)].comp(c)[flat];
        }
        w.back().comp(c)[flat] = sg * s;
      }
    });
    set_guards(w.back(), wbox);
    sync_periodic_halos(w.back());
  }

  std::vector<Field> dw;
  for (int i = 0; i < m; ++i) dw.push_back(deriv(w[static_cast<std::size_t>(i)], i));
  std::array<int, 3> obox = min_guard_box(lat, {&mf.sqrtg});
  for (int i = 0; i < m; ++i) {
    for (int d = 0; d < lat.dim(); ++d) {
      obox[static_cast<std::size_t>(d)] = std::min(
          obox[static_cast<std::size_t>(d)], dw[static_cast<std::size_t>(i)].guard(d));
    }
  }
  Field out(lat, nc);
  for_each_box(lat, obox, 1, [&](std::size_t flat, const int*) {
    const double sg = mf.sqrtg.comp(0)[flat];
    for (int c = 0; c < nc; ++c) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += dw[static_cast<std::size_t>(i)].comp(c)[flat];
      out.comp(c)[flat] = -s / sg;
    }
  });
  set_guards(out, obox);
  return out;
}

Field hessian(const Field& f, const MetricFields& mf) {
  const Lattice& lat = f.lattice();
  const int m = mf.m;
  std::vector<Field> df, d2f;
  for (int i = 0; i < m; ++i) df.push_back(deriv(f, i));
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      d2f.push_back(i == j ? deriv2(f, i) : deriv(df[static_cast<std::size_t>(i)], j));
    }
  }
  std::array<int, 3> box = min_guard_box(lat, {&mf.gamma});
  for (const Field& x : df) {
    for (int d = 0; d < lat.dim(); ++d) {
      box[static_cast<std::size_t>(d)] = std::min(box[static_cast<std::size_t>(d)], x.guard(d));
    }
  }
  for (const Field& x : d2f) {
    for (int d = 0; d < lat.dim(); ++d) {
      box[static_cast<std::size_t>(d)] = std::min(box[static_cast<std::size_t>(d)], x.guard(d));
    }
  }
  Field out(lat, m * m);
  for_each_box(lat, box, 1, [&](std::size_t flat, const int*) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        double s = d2f[static_cast<std::size_t>(sym_index(i, j, m))].comp(0)[flat];
        for (int k = 0; k < m; ++k) {
          s -= mf.gamma.comp((k * m + i) * m + j)[flat] *
               df[static_cast<std::size_t>(k)].comp(0)[flat];
        }
        out.comp(i * m + j)[flat] = s;
      }
    }
  });
  set_guards(out, box);
  return out;
}

Field div_vec(const Field& v, const MetricFields& mf) {
  const Lattice& lat = v.lattice();
  const int m = mf.m;
  Field w = ew_mul(v, mf.sqrtg);
  sync_periodic_halos(w);
  std::vector<Field> dw;
  for (int i = 0; i < m; ++i) dw.push_back(deriv(w, i));
  std::array<int, 3> box = min_guard_box(lat, {&mf.sqrtg});
  for (int i = 0; i < m; ++i) {
    for (int d = 0; d < lat.dim(); ++d) {
      box[static_cast<std::size_t>(d)] = std::min(
          box[static_cast<std::size_t>(d)], dw[static_cast<std::size_t>(i)].guard(d));
    }
  }
  Field out(lat, 1);
  for_each_box(lat, box, 1, [&](std::size_t flat, const int*) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += dw[static_cast<std::size_t>(i)].comp(i)[flat];
    out.comp(0)[flat] = s / mf.sqrtg.comp(0)[flat];
  });
  set_guards(out, box);
  return out;
}

Field covariant_deriv_op(const Field& t, const MetricFields& mf) {
  const Lattice& lat = t.lattice();
  const int m = mf.m;
  std::vector<Field> dt;
  for (int k = 0; k < m; ++k) dt.push_back(deriv(t, k));
  std::array<int, 3> box = min_guard_box(lat, {&mf.gamma});
  for (int k = 0; k < m; ++k) {
    for (int d = 0; d < lat.dim(); ++d) {
      box[static_cast<std::size_t>(d)] = std::min(
          box[static_cast<std::size_t>(d)], dt[static_cast<std::size_t>(k)].guard(d));
    }
  }
  Field out(lat, m * m * m);
  for_each_box(lat, box, 1, [&](std::size_t flat, const int*) {
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          double s = dt[static_cast<std::size_t>(k)].comp(i * m + j)[flat];
          for (int l = 0; l < m; ++l) {
            s += mf.gamma.comp((i * m + k) * m + l)[flat] * t.comp(l * m + j)[flat];
            s -= mf.gamma.comp((l * m + k) * m + j)[flat] * t.comp(i * m + l)[flat];
          }
          out.comp((k * m + i) * m + j)[flat] = s;
        }
      }
    }
  });
  set_guards(out, box);
  return out;
}

Field div_tensor02(const Field& s2, const MetricFields& mf) {
  const Lattice& lat = s2.lattice();
  const int m = mf.m;
  std::vector<Field> ds;
  for (int i = 0; i < m; ++i) ds.push_back(deriv(s2, i));
  std::array<int, 3> box = min_guard_box(lat, {&mf.gamma, &mf.ginv});
  for (int i = 0; i < m; ++i) {
    for (int d = 0; d < lat.dim(); ++d) {
      box[static_cast<std::size_t>(d)] = std::min(
          box[static_cast<std::size_t>(d)], ds[static_cast<std::size_t>(i)].guard(d));
    }
  }
  Field out(lat, m);
  for_each_box(lat, box, 1, [&](std::size_t flat, const int*) {
    for (int j = 0; j < m; ++j) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) {
          double cov = ds[static_cast<std::size_t>(i)].comp(k * m + j)[flat];
          for (int l = 0; l < m; ++l) {
            cov -= mf.gamma.comp((l * m + i) * m + k)[flat] * s2.comp(l * m + j)[flat];
            cov -= mf.gamma.comp((l * m + i) * m + j)[flat] * s2.comp(k * m + l)[flat];
          }
          acc += mf.ginv.comp(i * m + k)[flat] * cov;
        }
      }
      out.comp(j)[flat] = acc;
    }
  });
  set_guards(out, box);
  return out;
}

Field op_deriv_norm2(const Field& dt, const MetricFields& mf) {
  const Lattice& lat = dt.lattice();
  const int m = mf.m;
  std::array<int, 3> box = min_guard_box(lat, {&dt, &mf.g, &mf.ginv});
  Field out(lat, 1);
  for_each_box(lat, box, 1, [&](std::size_t flat, const int*) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) {
      for (int l = 0; l < m; ++l) {
        for (int i = 0; i < m; ++i) {
          for (int p = 0; p < m; ++p) {
            for (int j = 0; j < m; ++j) {
              for (int q = 0; q < m; ++q) {
                s += dt.comp((k * m + i) * m + j)[flat] *
                     dt.comp((l * m + p) * m + q)[flat] *
                     mf.ginv.comp(k * m + l)[flat] * mf.g.comp(i * m + p)[flat] *
                     mf.ginv.comp(j * m + q)[flat];
              }
            }
          }
        }
      }
    }
    out.comp(0)[flat] = s;
  });
  set_guards(out, box);
  return out;
}

Field gauss_curvature_intrinsic(const MetricFields& mf) {
  if (mf.m != 2) {
    throw std::logic_error("intrinsic curvature route needs a 2-dimensional chart");
  }
  const Lattice& lat = mf.g.lattice();
  // Brioschi formula from E = g_00, F = g_01, G = g_11.
  Field dgu = deriv(mf.g, 0);
  Field dgv = deriv(mf.g, 1);
  Field dguu = deriv2(mf.g, 0);
  Field dgvv = deriv2(mf.g, 1);
  Field dguv = deriv(dgu, 1);
  std::array<int, 3> box = min_guard_box(
      lat, {&dgu, &dgv, &dguu, &dgvv, &dguv, &mf.detg});
  Field out(lat, 1);
  for_each_box(lat, box, 1, [&](std::size_t flat, const int*) {
    const double E = mf.g.comp(0)[flat];
    const double F = mf.g.comp(1)[flat];
    const double G = mf.g.comp(3)[flat];
    const double Eu = dgu.comp(0)[flat], Ev = dgv.comp(0)[flat];
    const double Fu = dgu.comp(1)[flat], Fv = dgv.comp(1)[flat];
    const double Gu = dgu.comp(3)[flat], Gv = dgv.comp(3)[flat];
    const double Evv = dgvv.comp(0)[flat];
    const double Guu = dguu.comp(3)[flat];
    const double Fuv = dguv.comp(1)[flat];
    const double a11 = -0.5 * Evv + Fuv - 0.5 * Guu;
    const double det1 =
        a11 * (E * G - F * F) -
        0.5 * Eu * ((Fv - 0.5 * Gu) * G - F * 0.5 * Gv) +
        (Fu - 0.5 * Ev) * ((Fv - 0.5 * Gu) * F - E * 0.5 * Gv);
    const double det2 = -(0.5 * Ev) * (0.5 * Ev * G - F * 0.5 * Gu) +
                        0.5 * Gu * (0.5 * Ev * F - E * 0.5 * Gu);
    const double den = mf.detg.comp(0)[flat];
    out.comp(0)[flat] = (det1 - det2) / (den * den);
  });
  set_guards(out, box);
  return out;
}

}  // namespace spaceform
