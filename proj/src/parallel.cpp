#include "csgpart/parallel.hpp"

#include <algorithm>
#include <thread>

#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace csgpart {

struct WorkerPool::Impl {
  // The global limit defaults to the core count; lifting it lets an
  // explicit worker count take effect on smaller machines.
  explicit Impl(int threads)
      : limit(tbb::global_control::max_allowed_parallelism, static_cast<std::size_t>(threads)),
        arena(threads) {}
  tbb::global_control limit;
  mutable tbb::task_arena arena;
};

std::size_t hardware_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

WorkerPool::WorkerPool(std::size_t workers)
    : workers_(workers == 0 ? hardware_workers() : workers),
      impl_(std::make_unique<Impl>(static_cast<int>(workers_))) {}

WorkerPool::~WorkerPool() = default;

void WorkerPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) const {
  if (n == 0) return;
  impl_->arena.execute([&] {
    tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { fn(i); });
  });
}

}  // namespace csgpart
