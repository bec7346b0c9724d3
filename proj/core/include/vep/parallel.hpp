#pragma once

#include <functional>

namespace vep {

/// Run fn(i) for i in [0, n) over the given number of threads.  Work items
/// must write to disjoint slots; reductions over the slots happen in index
/// order afterwards, so results are identical for any thread count.
void parallel_for(int n, int num_threads, const std::function<void(int)>& fn);

}  // namespace vep
