#pragma once

#include <cstddef>
#include <functional>

namespace qcpn {

/// Worker count from QCPN_THREADS, else the hardware concurrency, at least 1.
int thread_count();

/// Runs body(chunk) for chunk in [0, chunks) on up to thread_count() threads.
/// Chunks are claimed dynamically, so callers must write per-chunk results
/// and combine them in chunk order to stay deterministic.
void parallel_for(std::size_t chunks, const std::function<void(std::size_t)>& body);

}  // namespace qcpn
