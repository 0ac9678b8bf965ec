#pragma once

#include <cstddef>
#include <functional>

namespace gnlab {

/// Worker cap used by parallel_for; 0 means hardware concurrency.
void set_max_jobs(unsigned jobs) noexcept;
unsigned max_jobs() noexcept;

/// Runs body(i) for i in [0, n). Every index must write only its own output
/// slot; results are then independent of scheduling. Runs inline below
/// min_parallel items or when called from inside another worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t min_parallel = 64,
                  std::size_t chunk = 16);

/// parallel_for for a handful of heavy tasks (one task per claim).
void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gnlab
