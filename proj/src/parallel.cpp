#include "glrr/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

#include "glrr/error.hpp"

namespace glrr {

int max_threads() { return omp_get_max_threads(); }

void set_max_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

void configure_threads_from_env() {
  const char* raw = std::getenv("GLRR_THREADS");
  if (raw == nullptr || *raw == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || n < 0) {
    throw Error(ErrorKind::Validation, std::string("GLRR_THREADS must be a non-negative integer, got '") + raw + "'");
  }
  set_max_threads(static_cast<int>(n));
}

}  // namespace glrr
