// Execution policy for the nodal kernels: every field construction runs
// either as a plain serial loop (the bit-exact reference) or as an
// OpenMP-parallel loop over nodes.  Per-node maps are bit-identical in
// both modes; only summation order differs, so deterministic runs route
// all reductions through the serial path.
#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace horolab {

enum class Exec { serial, omp };

template <typename Fn>
inline void parallel_for(std::size_t n, Exec exec, Fn&& fn) {
    if (exec == Exec::omp) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            fn(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) fn(i);
    }
}

// Max-reduction. max is exact regardless of order, so both paths agree
// bitwise.
template <typename Fn>
inline double parallel_max(std::size_t n, Exec exec, Fn&& fn) {
    double result = -1.7976931348623157e308;
    if (exec == Exec::omp) {
#pragma omp parallel for schedule(static) reduction(max : result)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            const double v = fn(static_cast<std::size_t>(i));
            if (v > result) result = v;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double v = fn(i);
            if (v > result) result = v;
        }
    }
    return result;
}

// Sum-reduction. Order-dependent in floating point: the omp path may
// differ from serial in the last bits, so anything feeding a
// deterministic report uses Exec::serial.
template <typename Fn>
inline double parallel_sum(std::size_t n, Exec exec, Fn&& fn) {
    double result = 0.0;
    if (exec == Exec::omp) {
#pragma omp parallel for schedule(static) reduction(+ : result)
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            result += fn(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) result += fn(i);
    }
    return result;
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace horolab
