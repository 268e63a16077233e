// Shared error types and small numeric utilities: deterministic reductions,
// a chunked parallel map, and fixed-precision number formatting.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spaceform {

// Bad user input: unknown surface id, out-of-range parameter, malformed grid.
// The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure: non-finite values, degenerate frames, integrator
// breakdown. The CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered pairwise summation. The reduction tree depends only on n, never on
// thread count or backend, so aggregate statistics are bit-stable.
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

// Runs fn(begin, end) over disjoint chunks of [0, n). Workers write to
// disjoint ranges only; any reduction happens afterwards, serially.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t, std::size_t)>& fn);

// Default worker count: SPACEFORM_JOBS env var, else hardware concurrency.
int default_jobs();

// Shortest-width decimal formatting with 17 significant digits, '.' decimal
// separator, locale-independent.
std::string format_g17(double x);

}  // namespace spaceform
