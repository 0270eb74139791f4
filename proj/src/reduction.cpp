/*
 * Copyright 2026 The nica Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "nica/reduction.hpp"

#include <algorithm>
#include <thread>

namespace nica {

namespace {
constexpr Index kCanonicalBlocks = 64;
}

std::vector<double> parallel_sum(
    Index count, std::size_t width, const ReductionOptions& opts,
    const std::function<void(Index, Index, std::vector<double>&)>& kernel) {
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  const Index blocks = std::max<Index>(
      1, std::min<Index>(count, opts.deterministic ? kCanonicalBlocks : static_cast<Index>(threads)));
  threads = static_cast<unsigned>(std::min<Index>(threads, blocks));

  std::vector<std::vector<double>> partial(static_cast<std::size_t>(blocks), std::vector<double>(width, 0.0));
  auto block_range = [&](Index b) {
    return std::pair<Index, Index>{count * b / blocks, count * (b + 1) / blocks};
  };
  auto worker = [&](unsigned t) {
    for (Index b = t; b < blocks; b += threads) {
      auto [lo, hi] = block_range(b);
      kernel(lo, hi, partial[static_cast<std::size_t>(b)]);
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  std::vector<double> total(width, 0.0);
  for (const auto& p : partial)
    for (std::size_t i = 0; i < width; ++i) total[i] += p[i];
  return total;
}

}  // namespace nica
