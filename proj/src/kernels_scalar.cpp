// Scalar reference kernels. Arithmetic order here is the contract every SIMD
// variant must reproduce lanewise: products first, then left-to-right adds,
// no fused multiply-add.
#include "spaceform/kernels.hpp"

namespace spaceform::kernels {

namespace {

void conv5_scalar(const double* in, double* out, std::size_t n,
                  std::ptrdiff_t s, const double w[5]) {
  const double w0 = w[0], w1 = w[1], w2 = w[2], w3 = w[3], w4 = w[4];
  for (std::size_t i = 0; i < n; ++i) {
    const double* p = in + i;
    double acc = w0 * p[-2 * s];
    acc = acc + w1 * p[-s];
    acc = acc + w2 * p[0];
    acc = acc + w3 * p[s];
    acc = acc + w4 * p[2 * s];
    out[i] = acc;
  }
}

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_add_scalar(const double* a, const double* b, const double* c,
                    double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i] + c[i];
}

void axpby_scalar(double alpha, const double* a, double beta, const double* b,
                  double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void scale_scalar(const double* a, double s, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = s * a[i];
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend b{"scalar", conv5_scalar, mul_scalar, mul_add_scalar,
                         axpby_scalar, scale_scalar};
  return b;
}

}  // namespace spaceform::kernels
