#include "mpersuade/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace mpersuade {

std::size_t worker_count() {
  if (const char* env = std::getenv("MP_SOLVER_THREADS"); env != nullptr) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // unparsable: fall through to the hardware default
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

std::size_t shard_count(std::size_t count) {
  if (count == 0) return 0;
  return std::min(count, worker_count());
}

void for_each_shard(std::size_t count,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t shards = shard_count(count);
  if (shards == 0) return;
  const auto begin_of = [&](std::size_t s) { return count * s / shards; };
  if (shards == 1) {
    body(0, 0, count);
    return;
  }
  std::vector<std::exception_ptr> errors(shards);
  {
    std::vector<std::jthread> threads;
    threads.reserve(shards - 1);
    for (std::size_t s = 1; s < shards; ++s) {
      threads.emplace_back([&, s] {
        try {
          body(s, begin_of(s), begin_of(s + 1));
        } catch (...) {
          errors[s] = std::current_exception();
        }
      });
    }
    try {
      body(0, 0, begin_of(1));
    } catch (...) {
      errors[0] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mpersuade
