// Runtime backend selection: pick the widest SIMD variant the CPU supports,
// honoring an explicit SPACEFORM_KERNEL override.
#include "spaceform/kernels.hpp"

#include <cstdlib>
#include <string>

#include "spaceform/common.hpp"

namespace spaceform::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const Backend* select() {
  if (const char* env = std::getenv("SPACEFORM_KERNEL")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_backend();
    if (want == "avx2") {
      const Backend* b = avx2_backend();
      if (b && cpu_has_avx2()) return b;
      throw InputError("SPACEFORM_KERNEL=avx2 requested but AVX2 is unavailable");
    }
    if (want == "neon") {
      if (const Backend* b = neon_backend()) return b;
      throw InputError("SPACEFORM_KERNEL=neon requested but NEON is unavailable");
    }
    throw InputError("unknown SPACEFORM_KERNEL value: " + want);
  }
  if (const Backend* b = avx2_backend(); b && cpu_has_avx2()) return b;
  if (const Backend* b = neon_backend()) return b;
  return &scalar_backend();
}

}  // namespace

const Backend& active() {
  static const Backend* chosen = select();
  return *chosen;
}

std::vector<const Backend*> available_backends() {
  std::vector<const Backend*> out{&scalar_backend()};
  if (const Backend* b = avx2_backend(); b && cpu_has_avx2()) out.push_back(b);
  if (const Backend* b = neon_backend()) out.push_back(b);
  return out;
}

}  // namespace spaceform::kernels
