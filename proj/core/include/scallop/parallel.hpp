#pragma once

#include <cstddef>
#include <functional>

namespace scallop {

/// Worker count: SCALLOP_THREADS when set, else hardware concurrency capped
/// at 8.
int worker_count();

/// Chunked parallel loop over [0, n). Only use with order-independent work
/// (min/max/flag reductions); report bytes must not depend on thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace scallop
