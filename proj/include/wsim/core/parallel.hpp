#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wsim::parallel {

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

/// Runs `body(i)` for i in [0, n). Iterations must write disjoint outputs.
template <class Body>
void for_each_index(std::size_t n, Body &&body) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

/// Reduction whose result does not depend on the thread count: the index
/// range is cut into fixed-size blocks, blocks are mapped in parallel, and
/// partial results are combined serially in block order.
template <class T, class MapBlock, class Combine>
T blocked_reduce(std::size_t n, std::size_t block, T init, MapBlock &&map_block, Combine &&combine) {
    if (n == 0) return init;
    if (block == 0) block = 1;
    const std::size_t blocks = (n + block - 1) / block;
    std::vector<T> partial(blocks, init);
    const auto count = static_cast<std::ptrdiff_t>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t b = 0; b < count; ++b) {
        const auto begin = static_cast<std::size_t>(b) * block;
        const auto end = begin + block < n ? begin + block : n;
        partial[static_cast<std::size_t>(b)] = map_block(begin, end);
    }
    T acc = std::move(init);
    for (auto &p : partial) acc = combine(std::move(acc), std::move(p));
    return acc;
}

} // namespace wsim::parallel
