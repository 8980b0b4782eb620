#pragma once

#include <cstddef>
#include <functional>
#include <memory>

namespace csgpart {

/// Bounded set of worker threads. parallel_for may be nested: an inner call
/// made from inside a running task shares the same workers.
class WorkerPool {
 public:
  /// `workers == 0` picks the hardware concurrency.
  explicit WorkerPool(std::size_t workers = 0);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t workers() const { return workers_; }

  /// Calls fn(i) for every i in [0, n); returns when all calls finished.
  /// The first exception thrown by fn is rethrown here.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) const;

 private:
  struct Impl;
  std::size_t workers_;
  std::unique_ptr<Impl> impl_;
};

std::size_t hardware_workers();

}  // namespace csgpart
