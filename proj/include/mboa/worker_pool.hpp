#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mboa {

/// Fixed set of threads running index-parallel loops. The calling thread
/// joins in, so a pool of W workers owns W - 1 helper threads. Indices are
/// handed out dynamically; tasks must only write state owned by their index.
class WorkerPool {
 public:
  explicit WorkerPool(int workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int workers() const noexcept { return workers_; }

  /// Runs task(0) .. task(count - 1) and blocks until all have finished.
  /// The first exception thrown by a task is rethrown here.
  void parallel_for(int count, const std::function<void(int)>& task);

 private:
  void worker_loop(std::stop_token stop);
  void drain();

  int workers_;
  std::mutex mutex_;
  std::condition_variable_any wake_;
  std::condition_variable done_;
  const std::function<void(int)>* task_ = nullptr;
  int count_ = 0;
  std::atomic<int> next_{0};
  int busy_ = 0;
  std::uint64_t epoch_ = 0;
  std::exception_ptr error_;
  std::vector<std::jthread> threads_;
};

}  // namespace mboa
