// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace uwbhar {

// Worker count used when the caller passes 0: UWBHAR_THREADS if set,
// otherwise std::thread::hardware_concurrency().
int default_threads();

// Runs fn(begin, end) over a static block partition of [0, n). Blocks are
// assigned by index, so any value written by exactly one iteration lands
// identically for every thread count. fn runs inline when n is small or
// threads == 1.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace uwbhar
