#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qsre {

/// Fixed chunk length for reductions. Partial sums are formed per chunk and
/// combined serially in chunk order, so the result does not depend on the
/// number of threads.
inline constexpr std::size_t kReductionChunk = std::size_t{1} << 12;

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int k) {
#ifdef _OPENMP
  if (k > 0) omp_set_num_threads(k);
#else
  (void)k;
#endif
}

/// Deterministic parallel sum of `partial(begin, end)` over [0, n).
template <class T, class F>
T chunked_sum(std::size_t n, F&& partial) {
  const std::size_t n_chunks = (n + kReductionChunk - 1) / kReductionChunk;
  if (n_chunks <= 1) return partial(std::size_t{0}, n);
  std::vector<T> partials(n_chunks);
  const auto chunks = static_cast<std::int64_t>(n_chunks);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::size_t b = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t e = b + kReductionChunk < n ? b + kReductionChunk : n;
    partials[static_cast<std::size_t>(c)] = partial(b, e);
  }
  T total{};
  for (const T& p : partials) total += p;
  return total;
}

}  // namespace qsre
