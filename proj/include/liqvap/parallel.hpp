#pragma once

#include <cstddef>
#include <span>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace liqvap {

// Execution policy for the data-parallel kernels (grid scans, PDE sweeps).
// Serial is the reference path and is kept for testing; Parallel uses OpenMP
// when the build has it and silently degrades to the serial loop otherwise.
enum class Exec { Serial, Parallel };

// Runs body(i) for i in [0, n). Bodies must only write to per-index slots;
// the static schedule keeps the iteration partition reproducible.
template <class F>
void parallel_for(Exec exec, std::size_t n, F&& body) {
#ifdef _OPENMP
    if (exec == Exec::Parallel) {
        const std::ptrdiff_t sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < sn; ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i)
        body(i);
}

// Sum in index order. Reductions over parallel-filled buffers go through this
// so results do not depend on the execution policy or thread count.
inline double indexed_sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v)
        s += x;
    return s;
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace liqvap
