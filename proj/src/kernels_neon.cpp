// NEON kernels (aarch64). Lanewise mirror of the scalar reference sequence:
// separate mul/add, left-to-right accumulation, vmulq/vaddq only (no vfmaq),
// so outputs are bitwise identical to the scalar backend.
#include "spaceform/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace spaceform::kernels {

namespace {

void conv5_neon(const double* in, double* out, std::size_t n, std::ptrdiff_t s,
                const double w[5]) {
  const double w0 = w[0], w1 = w[1], w2 = w[2], w3 = w[3], w4 = w[4];
  const float64x2_t vw0 = vdupq_n_f64(w0);
  const float64x2_t vw1 = vdupq_n_f64(w1);
  const float64x2_t vw2 = vdupq_n_f64(w2);
  const float64x2_t vw3 = vdupq_n_f64(w3);
  const float64x2_t vw4 = vdupq_n_f64(w4);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double* p = in + i;
    float64x2_t acc = vmulq_f64(vw0, vld1q_f64(p - 2 * s));
    acc = vaddq_f64(acc, vmulq_f64(vw1, vld1q_f64(p - s)));
    acc = vaddq_f64(acc, vmulq_f64(vw2, vld1q_f64(p)));
    acc = vaddq_f64(acc, vmulq_f64(vw3, vld1q_f64(p + s)));
    acc = vaddq_f64(acc, vmulq_f64(vw4, vld1q_f64(p + 2 * s)));
    vst1q_f64(out + i, acc);
  }
  for (; i < n; ++i) {
    const double* p = in + i;
    double acc = w0 * p[-2 * s];
    acc = acc + w1 * p[-s];
    acc = acc + w2 * p[0];
    acc = acc + w3 * p[s];
    acc = acc + w4 * p[2 * s];
    out[i] = acc;
  }
}

void mul_neon(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_add_neon(const double* a, const double* b, const double* c,
                  double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t prod = vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    vst1q_f64(out + i, vaddq_f64(prod, vld1q_f64(c + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i] + c[i];
}

void axpby_neon(double alpha, const double* a, double beta, const double* b,
                double* out, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  const float64x2_t vb = vdupq_n_f64(beta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t ta = vmulq_f64(va, vld1q_f64(a + i));
    float64x2_t tb = vmulq_f64(vb, vld1q_f64(b + i));
    vst1q_f64(out + i, vaddq_f64(ta, tb));
  }
  for (; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void scale_neon(const double* a, double s, double* out, std::size_t n) {
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(out + i, vmulq_f64(vs, vld1q_f64(a + i)));
  }
  for (; i < n; ++i) out[i] = s * a[i];
}

}  // namespace

const Backend* neon_backend() {
  static const Backend b{"neon", conv5_neon, mul_neon, mul_add_neon,
                         axpby_neon, scale_neon};
  return &b;
}

}  // namespace spaceform::kernels

#else

namespace spaceform::kernels {
const Backend* neon_backend() { return nullptr; }
}  // namespace spaceform::kernels

#endif
