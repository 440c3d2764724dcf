#pragma once

#include <cstddef>
#include <functional>

namespace csqar {

/// Worker count: CSQAR_THREADS if set and positive, else hardware concurrency.
std::size_t default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items are
/// handed out dynamically; callers reduce per-item results in index order so the
/// outcome does not depend on the schedule. The first exception is rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body);

} // namespace csqar
