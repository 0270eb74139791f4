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

#pragma once

#include "nica/common.hpp"

#include <functional>
#include <vector>

namespace nica {

/// How sample reductions are split across threads.
///
/// In deterministic mode the sample range is cut into a fixed number of
/// contiguous blocks that are summed sequentially and combined in block order,
/// so results are bit-identical for any thread count. Otherwise one block per
/// thread is used.
struct ReductionOptions {
  bool deterministic = true;
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Sums `kernel(begin, end)` over [0, count) into a vector of `width` values.
/// `kernel` must add its contribution into the accumulator it is handed.
std::vector<double> parallel_sum(
    Index count, std::size_t width, const ReductionOptions& opts,
    const std::function<void(Index begin, Index end, std::vector<double>& acc)>& kernel);

}  // namespace nica
