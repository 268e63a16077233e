// Lattice construction, halo maintenance, derivative sweeps, elementwise
// field algebra, interior statistics, and Richardson extrapolation.
#include "spaceform/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "spaceform/common.hpp"
#include "spaceform/kernels.hpp"

namespace spaceform {

namespace {

// Row-major offset of an interior index tuple into interior-sized arrays.
std::size_t interior_offset(const Lattice& lat, const int* idx) {
  std::size_t off = 0;
  for (int d = 0; d < lat.dim(); ++d) {
    off = off * static_cast<std::size_t>(lat.unique_count(d)) +
          static_cast<std::size_t>(idx[d]);
  }
  return off;
}

}  // namespace

Lattice::Lattice(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  dim_ = static_cast<int>(axes_.size());
  if (dim_ < 1 || dim_ > 3) {
    throw InputError("lattice dimension must be 1, 2, or 3");
  }
  for (int d = 0; d < dim_; ++d) {
    const AxisSpec& a = axes_[static_cast<std::size_t>(d)];
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw InputError("axis '" + a.name + "' needs finite lo < hi");
    }
    if (a.count < 9 || a.count > 4097) {
      throw InputError("axis '" + a.name + "' needs 9..4097 nodes");
    }
    nu_[static_cast<std::size_t>(d)] = a.periodic ? a.count - 1 : a.count;
    h_[static_cast<std::size_t>(d)] = (a.hi - a.lo) / (a.count - 1);
  }
  std::ptrdiff_t s = 1;
  for (int d = dim_ - 1; d >= 0; --d) {
    stride_[static_cast<std::size_t>(d)] = s;
    s *= nu_[static_cast<std::size_t>(d)] + 2 * kPad;
  }
  total_ = static_cast<std::size_t>(s);
  interior_ = 1;
  for (int d = 0; d < dim_; ++d) {
    interior_ *= static_cast<std::size_t>(nu_[static_cast<std::size_t>(d)]);
  }
  if (total_ > (std::size_t{1} << 27)) {
    throw InputError("lattice is too large");
  }
}

bool Lattice::refined_by(const Lattice& fine) const {
  if (fine.dim() != dim_) return false;
  for (int d = 0; d < dim_; ++d) {
    const AxisSpec& a = axis(d);
    const AxisSpec& b = fine.axis(d);
    if (a.lo != b.lo || a.hi != b.hi || a.periodic != b.periodic) return false;
    if (b.count != 2 * a.count - 1) return false;
  }
  return true;
}

Field::Field(const Lattice& lat, int ncomp)
    : lat_(&lat),
      ncomp_(ncomp),
      data_(static_cast<std::size_t>(ncomp) * lat.total(), 0.0) {
  if (ncomp < 1) throw std::logic_error("field needs at least one component");
}

int Field::min_guard() const {
  int g = kPad;
  for (int d = 0; d < lat_->dim(); ++d) g = std::min(g, guard(d));
  return g;
}

void sync_periodic_halos(Field& f) {
  const Lattice& lat = f.lattice();
  for (int d = 0; d < lat.dim(); ++d) {
    if (!lat.axis(d).periodic) continue;
    const int nu = lat.unique_count(d);
    const std::ptrdiff_t s = lat.stride(d);
    const std::size_t run = static_cast<std::size_t>(s);
    const std::size_t block = static_cast<std::size_t>(lat.extent(d)) * run;
    const std::size_t outer = lat.total() / block;
    for (int c = 0; c < f.ncomp(); ++c) {
      double* base = f.comp(c);
      for (std::size_t o = 0; o < outer; ++o) {
        double* plane0 = base + o * block;
        for (int j = 1; j <= kPad; ++j) {
          // interior index -j mirrors nu-j; interior index nu-1+j mirrors j-1
          std::memcpy(plane0 + static_cast<std::size_t>(kPad - j) * run,
                      plane0 + static_cast<std::size_t>(kPad + nu - j) * run,
                      run * sizeof(double));
          std::memcpy(plane0 + static_cast<std::size_t>(kPad + nu - 1 + j) * run,
                      plane0 + static_cast<std::size_t>(kPad + j - 1) * run,
                      run * sizeof(double));
        }
      }
    }
    f.set_guard(d, kPad);
  }
}

void for_each_box(const Lattice& lat, const std::array<int, 3>& g, int jobs,
                  const std::function<void(std::size_t, const int*)>& fn) {
  int len[3] = {1, 1, 1};
  for (int d = 0; d < lat.dim(); ++d) {
    len[d] = lat.unique_count(d) + 2 * g[static_cast<std::size_t>(d)];
  }
  const std::size_t m =
      static_cast<std::size_t>(len[0]) * static_cast<std::size_t>(len[1]) *
      static_cast<std::size_t>(len[2]);
  parallel_for(m, jobs, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      std::size_t r = t;
      int idx[3] = {0, 0, 0};
      idx[2] = static_cast<int>(r % static_cast<std::size_t>(len[2]));
      r /= static_cast<std::size_t>(len[2]);
      idx[1] = static_cast<int>(r % static_cast<std::size_t>(len[1]));
      idx[0] = static_cast<int>(r / static_cast<std::size_t>(len[1]));
      for (int d = 0; d < lat.dim(); ++d) idx[d] -= g[static_cast<std::size_t>(d)];
      fn(lat.flat(idx), idx);
    }
  });
}

Field eval_chart(const Lattice& lat, int ncomp,
                 const std::function<void(const double*, double*)>& fn,
                 int jobs) {
  Field out(lat, ncomp);
  std::array<int, 3> g{0, 0, 0};
  for (int d = 0; d < lat.dim(); ++d) {
    g[static_cast<std::size_t>(d)] = lat.axis(d).periodic ? 0 : kPad;
  }
  for_each_box(lat, g, jobs, [&](std::size_t flat, const int* idx) {
    double x[3] = {0.0, 0.0, 0.0};
    for (int d = 0; d < lat.dim(); ++d) x[d] = lat.coord(d, idx[d]);
    double v[16];
    fn(x, v);
    for (int c = 0; c < ncomp; ++c) out.comp(c)[flat] = v[c];
  });
  sync_periodic_halos(out);
  for (int d = 0; d < lat.dim(); ++d) out.set_guard(d, kPad);
  return out;
}

namespace {

Field apply_stencil(const Field& f, int axis, const double w[5]) {
  const Lattice& lat = f.lattice();
  if (axis < 0 || axis >= lat.dim()) throw std::logic_error("derivative axis out of range");
  if (!lat.axis(axis).periodic && f.guard(axis) < 2) {
    throw std::logic_error("derivative guard exhausted along axis");
  }
  Field out(lat, f.ncomp());
  const std::ptrdiff_t s = lat.stride(axis);
  const std::size_t n = lat.total() - 4 * static_cast<std::size_t>(s);
  const auto& k = kernels::active();
  for (int c = 0; c < f.ncomp(); ++c) {
    k.conv5(f.comp(c) + 2 * s, out.comp(c) + 2 * s, n, s, w);
  }
  for (int d = 0; d < lat.dim(); ++d) out.set_guard(d, f.guard(d));
  if (!lat.axis(axis).periodic) out.set_guard(axis, f.guard(axis) - 2);
  sync_periodic_halos(out);
  return out;
}

}  // namespace

Field deriv(const Field& f, int axis) {
  const double h = f.lattice().step(axis);
  const double r = 1.0 / (12.0 * h);
  const double w[5] = {1.0 * r, -8.0 * r, 0.0, 8.0 * r, -1.0 * r};
  return apply_stencil(f, axis, w);
}

Field deriv2(const Field& f, int axis) {
  const double h = f.lattice().step(axis);
  const double r = 1.0 / (12.0 * h * h);
  const double w[5] = {-1.0 * r, 16.0 * r, -30.0 * r, 16.0 * r, -1.0 * r};
  return apply_stencil(f, axis, w);
}

namespace {

void merge_guards(const Field& a, const Field& b, Field& out) {
  for (int d = 0; d < out.lattice().dim(); ++d) {
    out.set_guard(d, std::min(a.guard(d), b.guard(d)));
  }
}

}  // namespace

Field ew_mul(const Field& a, const Field& b) {
  const Lattice& lat = a.lattice();
  const int nc = std::max(a.ncomp(), b.ncomp());
  if (a.ncomp() != b.ncomp() && a.ncomp() != 1 && b.ncomp() != 1) {
    throw std::logic_error("ew_mul component mismatch");
  }
  Field out(lat, nc);
  const auto& k = kernels::active();
  for (int c = 0; c < nc; ++c) {
    const double* pa = a.comp(a.ncomp() == 1 ? 0 : c);
    const double* pb = b.comp(b.ncomp() == 1 ? 0 : c);
    k.mul(pa, pb, out.comp(c), lat.total());
  }
  merge_guards(a, b, out);
  return out;
}

Field ew_axpby(double alpha, const Field& a, double beta, const Field& b) {
  const Lattice& lat = a.lattice();
  const int nc = std::max(a.ncomp(), b.ncomp());
  if (a.ncomp() != b.ncomp() && a.ncomp() != 1 && b.ncomp() != 1) {
    throw std::logic_error("ew_axpby component mismatch");
  }
  Field out(lat, nc);
  const auto& k = kernels::active();
  for (int c = 0; c < nc; ++c) {
    const double* pa = a.comp(a.ncomp() == 1 ? 0 : c);
    const double* pb = b.comp(b.ncomp() == 1 ? 0 : c);
    k.axpby(alpha, pa, beta, pb, out.comp(c), lat.total());
  }
  merge_guards(a, b, out);
  return out;
}

Field ew_scale(const Field& a, double s) {
  Field out(a.lattice(), a.ncomp());
  const auto& k = kernels::active();
  for (int c = 0; c < a.ncomp(); ++c) {
    k.scale(a.comp(c), s, out.comp(c), a.lattice().total());
  }
  for (int d = 0; d < a.lattice().dim(); ++d) out.set_guard(d, a.guard(d));
  return out;
}

Mask full_mask(const Lattice& lat) { return Mask(lat.interior_nodes(), 1); }

Stats field_stats(const Field& f, const Mask* mask) {
  const Lattice& lat = f.lattice();
  Stats st;
  std::vector<double> sq;
  sq.reserve(lat.interior_nodes());
  double worst_sq = -1.0;
  for_each_box(lat, {0, 0, 0}, 1, [&](std::size_t flat, const int* idx) {
    if (mask && (*mask)[interior_offset(lat, idx)] == 0) return;
    double s = 0.0;
    for (int c = 0; c < f.ncomp(); ++c) {
      const double v = f.comp(c)[flat];
      s += v * v;
    }
    sq.push_back(s);
    if (s > worst_sq) {
      worst_sq = s;
      for (int d = 0; d < 3; ++d) st.worst_node[static_cast<std::size_t>(d)] = idx[d];
    }
  });
  st.n = sq.size();
  if (st.n == 0) return st;
  st.max_abs = std::sqrt(worst_sq);
  st.l2_mean = std::sqrt(pairwise_sum(sq.data(), sq.size()) /
                         static_cast<double>(sq.size()));
  return st;
}

double max_node_norm(const Field& f, const Mask* mask) {
  return field_stats(f, mask).max_abs;
}

Field richardson(const Field& coarse, const Field& fine, int order) {
  const Lattice& cl = coarse.lattice();
  const Lattice& fl = fine.lattice();
  if (!cl.refined_by(fl) || coarse.ncomp() != fine.ncomp()) {
    throw std::logic_error("richardson needs a matching 2x refinement");
  }
  const double factor = std::ldexp(1.0, order);
  Field out(cl, coarse.ncomp());
  for_each_box(cl, {0, 0, 0}, 1, [&](std::size_t flat, const int* idx) {
    int fidx[3] = {2 * idx[0], 2 * idx[1], 2 * idx[2]};
    const std::size_t fflat = fl.flat(fidx);
    for (int c = 0; c < coarse.ncomp(); ++c) {
      out.comp(c)[flat] =
          (factor * fine.comp(c)[fflat] - coarse.comp(c)[flat]) / (factor - 1.0);
    }
  });
  for (int d = 0; d < cl.dim(); ++d) out.set_guard(d, 0);
  return out;
}

Mask restrict_mask(const Lattice& coarse, const Lattice& fine, const Mask& fine_mask) {
  if (!coarse.refined_by(fine)) {
    throw std::logic_error("restrict_mask needs a matching 2x refinement");
  }
  Mask out(coarse.interior_nodes(), 1);
  for_each_box(coarse, {0, 0, 0}, 1, [&](std::size_t, const int* idx) {
    int fidx[3] = {2 * idx[0], 2 * idx[1], 2 * idx[2]};
    out[interior_offset(coarse, idx)] = fine_mask[interior_offset(fine, fidx)];
  });
  return out;
}

Mask and_masks(const Mask& a, const Mask& b) {
  if (a.size() != b.size()) throw std::logic_error("mask size mismatch");
  Mask out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] & b[i];
  return out;
}

}  // namespace spaceform
