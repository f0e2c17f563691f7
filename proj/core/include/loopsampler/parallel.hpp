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

#ifndef LOOPSAMPLER_PARALLEL_HPP
#define LOOPSAMPLER_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace loopsampler {

/// Global cap on worker threads (0 = hardware concurrency).
void set_thread_cap(int n);
int thread_cap();

/// Runs f(begin, end) over disjoint chunks of [0, n). f must be free of
/// shared mutable state across chunks.
template <typename F>
void parallel_for_chunks(std::size_t n, F&& f) {
    if (n == 0) return;
    int workers = thread_cap();
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<std::size_t>(workers, n));
    if (workers == 1) {
        f(std::size_t(0), n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&f, begin, end] { f(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace loopsampler

#endif
