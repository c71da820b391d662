#pragma once

#include <cstddef>
#include <functional>

namespace idsq {

/// Worker count from IDSQ_JOBS, else the hardware concurrency (at least 1).
unsigned default_jobs();

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Each index is
/// handled exactly once; the first exception thrown is rethrown here.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace idsq
