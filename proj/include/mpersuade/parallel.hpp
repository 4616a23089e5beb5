#pragma once

#include <cstddef>
#include <functional>

namespace mpersuade {

// Worker cap: MP_SOLVER_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Splits [0, count) into at most worker_count() contiguous shards and calls
// body(shard, begin, end) for each, possibly concurrently. Shard indices are
// ordered by position, so callers reduce per-shard results in shard order to
// get a result independent of the thread count.
std::size_t shard_count(std::size_t count);
void for_each_shard(std::size_t count,
                    const std::function<void(std::size_t shard, std::size_t begin,
                                             std::size_t end)>& body);

}  // namespace mpersuade
