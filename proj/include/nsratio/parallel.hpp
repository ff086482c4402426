#pragma once

#include <cstddef>
#include <functional>

namespace nsratio {

/// Worker count used when a caller passes 0. Defaults to the hardware concurrency.
void set_default_threads(unsigned n);
[[nodiscard]] unsigned default_threads();

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Indices are handed out dynamically; the first exception thrown by any
/// call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

}  // namespace nsratio
