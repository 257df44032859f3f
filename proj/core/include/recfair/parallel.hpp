// Copyright 2026 The recfair authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace recfair {

// Caps the number of worker threads used by pairwise loops; 0 restores the
// hardware default. Numerical output never depends on this setting: work is
// cut into fixed-size blocks and reductions combine block results in block
// order.
void set_thread_count(unsigned n);
unsigned thread_count();

inline std::size_t block_count(std::size_t total, std::size_t block_size) {
  return total == 0 ? 0 : (total - 1) / block_size + 1;
}

// Runs fn(block_index, begin, end) for every fixed-size block of [0, total).
// Blocks may execute on different threads; each block runs sequentially.
void parallel_blocks(
    std::size_t total, std::size_t block_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Deterministic parallel reduction: sums fn(begin, end) over fixed blocks,
// combining partial sums in block order regardless of thread count.
double parallel_block_sum(
    std::size_t total, std::size_t block_size,
    const std::function<double(std::size_t, std::size_t)>& fn);

}  // namespace recfair
