#pragma once

#include <cstddef>
#include <vector>

namespace cda::par {

// Reductions are accumulated over fixed-size blocks and the block partials are
// summed in index order, so results do not depend on the thread count or on
// OpenMP scheduling.
inline constexpr std::size_t kReduceBlock = 4096;

// Loops shorter than this stay serial.
inline constexpr std::ptrdiff_t kParallelThreshold = 2048;

// Applies CDA_THREADS (if set) as the OpenMP thread cap. Returns the cap in use.
int configure_threads_from_env();
int max_threads();

template <class Term>
double blocked_sum(std::size_t n, Term&& term) {
  const auto nblocks = static_cast<std::ptrdiff_t>((n + kReduceBlock - 1) / kReduceBlock);
  if (nblocks <= 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
  }
  std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

template <class Term>
double blocked_max(std::size_t n, Term&& term) {
  const auto nblocks = static_cast<std::ptrdiff_t>((n + kReduceBlock - 1) / kReduceBlock);
  std::vector<double> partial(static_cast<std::size_t>(nblocks > 0 ? nblocks : 1), 0.0);
#pragma omp parallel for schedule(static) if (nblocks > 1)
  for (std::ptrdiff_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double v = term(i);
      if (v > m) m = v;
    }
    partial[static_cast<std::size_t>(b)] = m;
  }
  double total = 0.0;
  for (double p : partial) total = p > total ? p : total;
  return total;
}

template <class Body>
void for_each_index(std::size_t n, Body&& body) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (sn > kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < sn; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace cda::par
