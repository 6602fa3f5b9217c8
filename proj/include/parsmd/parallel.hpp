#ifndef PARSMD_PARALLEL_HPP
#define PARSMD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace parsmd {

// Worker count from PARSMD_WORKERS if set and positive, else the hardware
// concurrency (at least 1).
unsigned default_worker_count();

// Runs body(i) for every i in [0, count) on up to `workers` threads (the
// caller participates). Idle workers claim the next unprocessed index from a
// shared counter, so uneven job lengths balance out. Callers write results
// into slot i of a pre-sized buffer; no ordering between jobs is implied.
// If jobs throw, the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace parsmd

#endif  // PARSMD_PARALLEL_HPP
