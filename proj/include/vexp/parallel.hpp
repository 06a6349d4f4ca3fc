#pragma once

#include <exception>
#include <mutex>

#include "vexp/types.hpp"

namespace vexp {

/// Runs body(k) for k = 0..n-1, across OpenMP threads when exec is parallel.
/// Each index must write only its own output slot so both paths agree. The
/// first exception thrown by any iteration is rethrown on the caller.
template <typename Body>
void parallel_for(long n, Exec exec, Body&& body) {
  std::exception_ptr error;
  std::mutex guard;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long k = 0; k < n; ++k) {
    try {
      body(k);
    } catch (...) {
      std::lock_guard lock(guard);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace vexp
