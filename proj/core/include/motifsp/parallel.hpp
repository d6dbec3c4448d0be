#pragma once

#include <cstddef>
#include <functional>

namespace motifsp {

/// Fixed-width worker group for index-parallel loops.
///
/// Work items are claimed dynamically, so callers that need deterministic
/// output must write into per-index slots and reduce in index order
/// afterwards. Nested calls from inside a worker run serially on that worker.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t threads = 1);

  std::size_t threads() const noexcept { return threads_; }

  /// Runs body(i) for every i in [0, count). The first exception thrown by
  /// the lowest failing index is rethrown after all workers join.
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) const;

  /// Resolves a thread count from a flag value, falling back to the
  /// MOTIFSP_THREADS environment variable and then to 1.
  static std::size_t resolve_threads(std::size_t requested);

 private:
  std::size_t threads_;
};

/// Serial fallback used when no pool is supplied.
inline void parallel_for(const WorkerPool* pool, std::size_t count,
                         const std::function<void(std::size_t)>& body) {
  if (pool) {
    pool->parallel_for(count, body);
  } else {
    for (std::size_t i = 0; i < count; ++i) body(i);
  }
}

}  // namespace motifsp
