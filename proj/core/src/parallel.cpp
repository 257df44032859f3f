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

#include "recfair/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace recfair {

namespace {
std::atomic<unsigned> g_thread_cap{0};
}  // namespace

void set_thread_count(unsigned n) { g_thread_cap.store(n); }

unsigned thread_count() {
  unsigned cap = g_thread_cap.load();
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return cap == 0 ? hw : std::min(cap, hw);
}

void parallel_blocks(
    std::size_t total, std::size_t block_size,
    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (total == 0) return;
  const std::size_t blocks = block_count(total, block_size);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(thread_count(), blocks));

  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    const std::size_t end = std::min(total, begin + block_size);
    fn(b, begin, end);
  };

  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= blocks) return;
        run_block(b);
      }
    });
  }
  for (auto& t : pool) t.join();
}

double parallel_block_sum(
    std::size_t total, std::size_t block_size,
    const std::function<double(std::size_t, std::size_t)>& fn) {
  const std::size_t blocks = block_count(total, block_size);
  std::vector<double> partial(blocks, 0.0);
  parallel_blocks(total, block_size,
                  [&](std::size_t b, std::size_t begin, std::size_t end) {
                    partial[b] = fn(begin, end);
                  });
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

}  // namespace recfair
