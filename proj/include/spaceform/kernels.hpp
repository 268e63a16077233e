// Data-parallel array kernels behind every stencil sweep and elementwise plane
// operation: a scalar reference implementation plus SIMD variants selected at
// runtime. All variants use the same per-element arithmetic order and no FMA,
// so their outputs are bitwise identical; equivalence is asserted in tests.
#pragma once

#include <cstddef>
#include <vector>

namespace spaceform::kernels {

struct Backend {
  const char* name;
  // out[i] = w0*in[i-2s] + w1*in[i-s] + w2*in[i] + w3*in[i+s] + w4*in[i+2s].
  // The caller guarantees in[-2s .. n-1+2s] is addressable.
  void (*conv5)(const double* in, double* out, std::size_t n, std::ptrdiff_t s,
                const double w[5]);
  // out[i] = a[i] * b[i]
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out[i] = a[i] * b[i] + c[i]
  void (*mul_add)(const double* a, const double* b, const double* c,
                  double* out, std::size_t n);
  // out[i] = alpha*a[i] + beta*b[i]
  void (*axpby)(double alpha, const double* a, double beta, const double* b,
                double* out, std::size_t n);
  // out[i] = s * a[i]
  void (*scale)(const double* a, double s, double* out, std::size_t n);
};

// Runtime-selected backend: AVX2 / NEON when the CPU supports it, otherwise
// scalar. Overridable via SPACEFORM_KERNEL=scalar|avx2|neon.
const Backend& active();
const Backend& scalar_backend();

// Every backend the current binary+CPU can run (for equivalence tests).
std::vector<const Backend*> available_backends();

// Defined per translation unit; null when compiled out or unsupported.
const Backend* avx2_backend();
const Backend* neon_backend();

}  // namespace spaceform::kernels
