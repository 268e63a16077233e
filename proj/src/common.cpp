#include "spaceform/common.hpp"

#include <cstdio>
#include <cstdlib>
#include <thread>

namespace spaceform {

double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (jobs <= 0) jobs = default_jobs();
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  if (nthreads <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t b = t * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

int default_jobs() {
  if (const char* env = std::getenv("SPACEFORM_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace spaceform
