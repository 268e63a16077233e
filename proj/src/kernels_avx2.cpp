// AVX2 kernels. Each vector lane performs exactly the scalar reference
// sequence (separate mul and add, left-to-right accumulation, no FMA), so
// results are bitwise identical to the scalar backend; remainders fall back
// to the same scalar expression.
#include "spaceform/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace spaceform::kernels {

namespace {

void conv5_avx2(const double* in, double* out, std::size_t n, std::ptrdiff_t s,
                const double w[5]) {
  const double w0 = w[0], w1 = w[1], w2 = w[2], w3 = w[3], w4 = w[4];
  const __m256d vw0 = _mm256_set1_pd(w0);
  const __m256d vw1 = _mm256_set1_pd(w1);
  const __m256d vw2 = _mm256_set1_pd(w2);
  const __m256d vw3 = _mm256_set1_pd(w3);
  const __m256d vw4 = _mm256_set1_pd(w4);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const double* p = in + i;
    __m256d acc = _mm256_mul_pd(vw0, _mm256_loadu_pd(p - 2 * s));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vw1, _mm256_loadu_pd(p - s)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vw2, _mm256_loadu_pd(p)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vw3, _mm256_loadu_pd(p + s)));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(vw4, _mm256_loadu_pd(p + 2 * s)));
    _mm256_storeu_pd(out + i, acc);
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

void mul_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_add_avx2(const double* a, const double* b, const double* c,
                  double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(prod, _mm256_loadu_pd(c + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i] + c[i];
}

void axpby_avx2(double alpha, const double* a, double beta, const double* b,
                double* out, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d ta = _mm256_mul_pd(va, _mm256_loadu_pd(a + i));
    __m256d tb = _mm256_mul_pd(vb, _mm256_loadu_pd(b + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(ta, tb));
  }
  for (; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void scale_avx2(const double* a, double s, double* out, std::size_t n) {
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(vs, _mm256_loadu_pd(a + i)));
  }
  for (; i < n; ++i) out[i] = s * a[i];
}

}  // namespace

const Backend* avx2_backend() {
  static const Backend b{"avx2", conv5_avx2, mul_avx2, mul_add_avx2,
                         axpby_avx2, scale_avx2};
  return &b;
}

}  // namespace spaceform::kernels

#else

namespace spaceform::kernels {
const Backend* avx2_backend() { return nullptr; }
}  // namespace spaceform::kernels

#endif
