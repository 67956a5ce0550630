// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The hiris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HIRIS_PARALLEL_HPP
#define HIRIS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace hiris {

/// Number of workers used by parallel_for. Defaults to the hardware
/// concurrency; set_worker_count(0) restores the default.
std::size_t worker_count();
void set_worker_count(std::size_t n);

/// Runs body(i) for i in [0, n). Iterations are statically partitioned into
/// contiguous blocks, so any body that writes only to slot i produces
/// results independent of the worker count. The first exception thrown by a
/// body is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hiris

#endif  // HIRIS_PARALLEL_HPP
