#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace discrepancy {

/// 0 means "one worker per hardware thread".
std::size_t resolve_jobs(std::size_t jobs);

/// Runs body(0..count-1) on up to `jobs` threads. If any call throws, the
/// exception from the lowest failing index is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& body);

/// Smallest k in [0, count) with pred(k) true, or nullopt. Indices are handed
/// out in increasing order and every index below the winner is evaluated, so
/// the answer does not depend on `jobs`.
std::optional<std::size_t> parallel_first(std::size_t count, std::size_t jobs,
                                          const std::function<bool(std::size_t)>& pred);

}  // namespace discrepancy
