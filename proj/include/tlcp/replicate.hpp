#pragma once

#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

// Replicate-parallel Monte Carlo driver. Each replicate is an independent
// function of its index (seeds are derived per index), results land in a
// slot vector and are reduced afterwards in index order, so the output is
// identical for any thread count. The serial loop is the reference
// implementation; the OpenMP kernel must reproduce it bit for bit (tested).
namespace tlcp {

template <class T, class Fn>
std::vector<T> run_replicates_serial(long n, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
  return out;
}

// threads == 1 runs the serial reference; threads <= 0 uses all available.
template <class T, class Fn>
std::vector<T> run_replicates(long n, int threads, Fn&& fn) {
  if (threads == 1) return run_replicates_serial<T>(n, fn);
  std::vector<T> out(static_cast<std::size_t>(n));
#if defined(_OPENMP)
  int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
#else
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
#endif
  return out;
}

}  // namespace tlcp
