#include "gnlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gnlab {

namespace {
std::atomic<unsigned> g_jobs{0};
// nested calls run inline so that task-level and data-level parallelism do
// not multiply thread counts
thread_local bool t_in_worker = false;

struct WorkerScope {
  bool saved = t_in_worker;
  WorkerScope() { t_in_worker = true; }
  ~WorkerScope() { t_in_worker = saved; }
};
}

void set_max_jobs(unsigned jobs) noexcept { g_jobs.store(jobs); }

unsigned max_jobs() noexcept {
  unsigned j = g_jobs.load();
  if (j == 0) j = std::max(1u, std::thread::hardware_concurrency());
  return j;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, std::size_t min_parallel,
                  std::size_t chunk) {
  const std::size_t workers = std::min<std::size_t>(max_jobs(), n);
  if (workers <= 1 || n < min_parallel || t_in_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const std::size_t kChunk = std::max<std::size_t>(chunk, 1);
  auto run = [&] {
    WorkerScope scope;
    for (;;) {
      std::size_t start = next.fetch_add(kChunk);
      if (start >= n) return;
      std::size_t stop = std::min(n, start + kChunk);
      try {
        for (std::size_t i = start; i < stop; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
  }
  if (error) std::rethrow_exception(error);
}

void parallel_tasks(std::size_t n, const std::function<void(std::size_t)>& body) {
  parallel_for(n, body, 2, 1);
}

}  // namespace gnlab
