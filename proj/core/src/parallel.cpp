/**
 * Copyright 2026 Loopsampler Authors
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

#include "loopsampler/parallel.hpp"

#include <atomic>

namespace loopsampler {

namespace {
std::atomic<int> g_thread_cap{0};
}

void set_thread_cap(int n) { g_thread_cap.store(n < 0 ? 0 : n); }
int thread_cap() { return g_thread_cap.load(); }

} // namespace loopsampler
