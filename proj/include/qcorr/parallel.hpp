#pragma once

#include <functional>

namespace qcorr {

/// Worker count: explicit argument > QCORR_THREADS env > 1.
int resolve_threads(int requested = 0);

/// Runs fn(0..n-1) across workers. fn(i) must touch only its own slot, so
/// results are identical for any worker count.
void parallel_for(int n, const std::function<void(int)>& fn,
                  int threads = 0);

}  // namespace qcorr
