#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace conelab {

/// Worker count: hardware concurrency, capped by CONELAB_THREADS when set.
int thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads.  Callers write
/// results into pre-sized slots so the reduction order stays fixed.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// splitmix64 finalizer of base + index; used to give every task its own stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace conelab
