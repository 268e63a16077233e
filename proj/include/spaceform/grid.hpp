// Chart-grid lattices and padded scalar/vector fields.
//
// A Lattice discretizes a rectangular chart domain with up to three axes.
// Each axis stores only unique nodes (a periodic axis drops the duplicate
// endpoint) and is padded with kPad halo layers per side. Halos on
// non-periodic axes hold genuine chart evaluations just outside the domain;
// halos on periodic axes are bitwise copies of the wrapped interior values,
// so derivative sweeps never see seam roundoff.
//
// Fields track per-axis "guard" counts: how many halo layers beyond the
// interior still hold valid values. A 5-point derivative consumes two guard
// layers along its axis (and restores them on periodic axes via halo copy).
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace spaceform {

// Deepest stencil chain: chart -> metric (2 layers) -> intrinsic curvature
// (2 more) -> its Laplacian (4 more) = 8 halo layers along one axis.
inline constexpr int kPad = 8;

struct AxisSpec {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  int count = 0;      // nodes including both endpoints (periodic: endpoint pair identified)
  bool periodic = false;
};

class Lattice {
 public:
  explicit Lattice(std::vector<AxisSpec> axes);

  int dim() const { return dim_; }
  const AxisSpec& axis(int d) const { return axes_[static_cast<std::size_t>(d)]; }
  int unique_count(int d) const { return nu_[static_cast<std::size_t>(d)]; }
  int extent(int d) const { return nu_[static_cast<std::size_t>(d)] + 2 * kPad; }
  std::ptrdiff_t stride(int d) const { return stride_[static_cast<std::size_t>(d)]; }
  std::size_t total() const { return total_; }
  std::size_t interior_nodes() const { return interior_; }
  double step(int d) const { return h_[static_cast<std::size_t>(d)]; }
  // Coordinate of interior-based index i (may lie outside [0, unique_count)).
  double coord(int d, int i) const {
    return axes_[static_cast<std::size_t>(d)].lo + i * h_[static_cast<std::size_t>(d)];
  }
  // Flat offset of interior-based index tuple (halo pad added internally).
  std::size_t flat(const int* idx) const {
    std::ptrdiff_t off = 0;
    for (int d = 0; d < dim_; ++d) {
      off += (idx[d] + kPad) * stride_[static_cast<std::size_t>(d)];
    }
    return static_cast<std::size_t>(off);
  }
  // True when `fine` covers the same domain with 2*count-1 nodes per axis.
  bool refined_by(const Lattice& fine) const;

 private:
  std::vector<AxisSpec> axes_;
  int dim_ = 0;
  std::array<int, 3> nu_{1, 1, 1};
  std::array<std::ptrdiff_t, 3> stride_{0, 0, 0};
  std::array<double, 3> h_{0.0, 0.0, 0.0};
  std::size_t total_ = 0;
  std::size_t interior_ = 0;
};

class Field {
 public:
  Field(const Lattice& lat, int ncomp);

  const Lattice& lattice() const { return *lat_; }
  int ncomp() const { return ncomp_; }
  int guard(int d) const { return guard_[static_cast<std::size_t>(d)]; }
  void set_guard(int d, int g) { guard_[static_cast<std::size_t>(d)] = g; }
  int min_guard() const;

  double* comp(int c) { return data_.data() + static_cast<std::size_t>(c) * lat_->total(); }
  const double* comp(int c) const {
    return data_.data() + static_cast<std::size_t>(c) * lat_->total();
  }
  double at(int c, const int* idx) const { return comp(c)[lat_->flat(idx)]; }
  double& at(int c, const int* idx) { return comp(c)[lat_->flat(idx)]; }

 private:
  const Lattice* lat_;
  int ncomp_;
  std::array<int, 3> guard_{kPad, kPad, kPad};
  std::vector<double> data_;
};

// Copies wrapped interior planes into the halos of every periodic axis and
// marks those axes fully guarded.
void sync_periodic_halos(Field& f);

// Evaluates fn(x, out) at every node: halo coordinates included on
// non-periodic axes, copy-synced on periodic axes. Resulting guard is kPad
// on all axes.
Field eval_chart(const Lattice& lat, int ncomp,
                 const std::function<void(const double* x, double* out)>& fn,
                 int jobs = 1);

// Fourth-order centered first/second derivative along one axis (applied to
// every component). Guards drop by two along a non-periodic axis and are
// restored by halo copy along a periodic one.
Field deriv(const Field& f, int axis);
Field deriv2(const Field& f, int axis);

// Elementwise helpers over full padded planes (guards become the operand
// minimum). One-component operands broadcast across the other's components.
Field ew_mul(const Field& a, const Field& b);
Field ew_axpby(double alpha, const Field& a, double beta, const Field& b);
Field ew_scale(const Field& a, double s);

// Runs fn(flat, idx) at every node of the box extending g[d] layers past the
// interior along axis d. Deterministic and byte-stable across job counts:
// nodes are partitioned by index, fn must write only its own node.
void for_each_box(const Lattice& lat, const std::array<int, 3>& g, int jobs,
                  const std::function<void(std::size_t flat, const int* idx)>& fn);

// Interior-node mask, row-major over unique nodes; 1 = include.
using Mask = std::vector<std::uint8_t>;
Mask full_mask(const Lattice& lat);

struct Stats {
  double max_abs = 0.0;   // max over interior nodes of per-node component norm
  double l2_mean = 0.0;   // RMS of per-node component norms
  std::array<int, 3> worst_node{0, 0, 0};
  std::size_t n = 0;      // nodes counted (after masking)
};

// Interior-only statistics; per-node magnitude is the Euclidean norm across
// components. Serial ordered scan: byte-identical across runs and job counts.
Stats field_stats(const Field& f, const Mask* mask = nullptr);

// Max per-node component norm over the interior (scale extraction).
double max_node_norm(const Field& f, const Mask* mask = nullptr);

// Richardson extrapolation of an order-`order` quantity sampled on a lattice
// and its 2x refinement; the result lives on the coarse lattice (interior
// guard 0).
Field richardson(const Field& coarse, const Field& fine, int order = 4);

// Restricts a fine-lattice mask to coarse nodes (even fine indices).
Mask restrict_mask(const Lattice& coarse, const Lattice& fine, const Mask& fine_mask);
Mask and_masks(const Mask& a, const Mask& b);

}  // namespace spaceform
