#pragma once

#include <cstddef>
#include <functional>

namespace freegrass {

// Worker cap: FREEGRASS_THREADS if set, else hardware concurrency.
std::size_t worker_count();
void set_worker_count(std::size_t n);

// Runs body(i) for i in [0, count). Each index writes only its own output
// slot, so results do not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace freegrass
