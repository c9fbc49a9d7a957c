// Deterministic fork-join helpers. Work items write to their own slots, so
// results never depend on the schedule.
#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace holodyn {

/// Worker count: the explicit request if given, else TD_THREADS, else the
/// hardware concurrency (at least 1).
int resolve_threads(std::optional<int> requested = std::nullopt);

/// Process-wide cap used by parallel_for. Defaults to resolve_threads().
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n). Items are handed out in contiguous chunks.
/// The first exception thrown by any item is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace holodyn
