#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace qatn {

inline constexpr const char* kWorkersEnvVar = "QATN_WORKERS";

/// Worker count from QATN_WORKERS, else the hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads. If any call
/// throws, the exception from the lowest index is rethrown after all finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t workers = worker_count());

/// splitmix64 finalizer; used to derive per-task seeds from a root seed.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace qatn
