#pragma once

namespace glrr {

/// Worker count for the OpenMP kernels. Reads GLRR_THREADS once when
/// `configure_threads_from_env` is called (0 or unset means the OpenMP default).
int max_threads();
void set_max_threads(int n);
void configure_threads_from_env();

}  // namespace glrr
