#pragma once

#include <cstdint>
#include <functional>

namespace mpk {

/// Worker count: min(hardware_concurrency, MPK_THREADS) with MPK_THREADS
/// read once from the environment.
int worker_count();

/// Static range split over worker_count() threads. Falls back to a plain
/// loop when one worker suffices.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace mpk
