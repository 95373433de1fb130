#pragma once

#include <cstddef>
#include <functional>

namespace lfi {

/// Runs body(i) for i in [0, n) on `workers` threads. Results must be written
/// to index-addressed slots; completion order is unspecified. If any call
/// throws, the exception from the lowest index is rethrown after all work
/// has stopped.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace lfi
