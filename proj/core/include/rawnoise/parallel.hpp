// Copyright (c) 2026 The rawnoise project authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <functional>

namespace rawnoise {

/// Global worker-thread cap (0 = hardware concurrency). Output of every
/// routine in this library is independent of the setting; it only controls
/// how row ranges are partitioned.
void set_max_threads(unsigned n);
unsigned max_threads();

/// Runs fn(begin, end) over a partition of [0, count). fn must only touch
/// state disjoint per range.
void parallel_for_rows(std::size_t count,
                       const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace rawnoise
