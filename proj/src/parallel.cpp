#include "cda/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace cda::par {

int configure_threads_from_env() {
  if (const char* env = std::getenv("CDA_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap > 0) omp_set_num_threads(cap);
    } catch (const std::exception&) {
      // malformed value: keep the OpenMP default
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace cda::par
