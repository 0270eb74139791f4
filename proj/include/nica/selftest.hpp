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

#include <string>
#include <vector>

namespace nica {

struct SelfTestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Exact-oracle checks that need no sampling: derivative consistency,
/// AllOPT on analytic oracles, the recovery constant in the exact limit, and
/// matching optimality against exhaustive search.
std::vector<SelfTestResult> run_selftest(bool strict_params);

}  // namespace nica
