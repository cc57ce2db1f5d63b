// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace expchar {

/// Caps worker threads for all parallel loops. 0 means hardware concurrency.
void set_max_threads(int n) noexcept;
int max_threads() noexcept;

/// Runs fn(0..count-1), possibly on several threads. Iterations must be
/// independent and write only to their own slots; outputs are then identical
/// for every thread count. Nested calls degrade to serial execution.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace expchar
