// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <cstddef>
#include <functional>

namespace shiftrule {

/// Number of worker threads to use: `requested` if nonzero, otherwise the
/// SHIFTRULE_THREADS environment variable, otherwise the hardware thread
/// count.  Always at least 1.
std::size_t resolve_thread_count(std::size_t requested);

/// Run fn(i) for i in [0, count) across `threads` workers.  Each index is
/// processed exactly once and writes only its own outputs, so results are
/// identical for every thread count; reductions over the outputs must be
/// done sequentially by the caller.  Exceptions from workers are rethrown.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace shiftrule
