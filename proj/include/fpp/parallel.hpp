#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

#include "fpp/field.hpp"

namespace fpp {

// Number of OpenMP threads used by parallel kernels; 0 leaves the runtime default.
void set_thread_count(int threads);
int thread_count();

// Runs fn(i) for i in [0, count). Results must be written to per-index slots
// so that reductions stay order-fixed; the first exception is rethrown.
template <typename Fn>
void for_each_index(std::size_t count, Exec exec, Fn&& fn) {
    std::exception_ptr failure;
    std::mutex guard;
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::Parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(guard);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace fpp
