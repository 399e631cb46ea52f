#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace arv {

/// Number of work chunks used for parallel gradient/map reductions. Fixed
/// (independent of the machine's thread count) so that chunk-ordered
/// summations give bit-identical results everywhere.
inline constexpr std::size_t kReduceChunks = 8;

/// Contiguous [begin, end) ranges splitting item_count into chunk_count
/// pieces (sizes differ by at most one; trailing chunks may be empty).
std::vector<std::pair<std::size_t, std::size_t>> chunk_ranges(
    std::size_t item_count, std::size_t chunk_count);

/// Runs fn(chunk, begin, end) for every chunk, distributing chunks over a
/// small thread pool. fn must only write to chunk-private state.
void parallel_chunks(
    std::size_t item_count, std::size_t chunk_count,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Worker threads to use: ARV_THREADS env override, else hardware count.
std::size_t worker_thread_count();

}  // namespace arv
