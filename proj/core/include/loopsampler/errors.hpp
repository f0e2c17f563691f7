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

#ifndef LOOPSAMPLER_ERRORS_HPP
#define LOOPSAMPLER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace loopsampler {

/// Shape/dimension mismatches (non-square permanent input, block size errors, ...).
struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Out-of-range mode index in a multiset selection.
struct BoundsError : std::out_of_range {
    explicit BoundsError(const std::string& msg) : std::out_of_range(msg) {}
};

/// Enumeration would exceed the configured outcome cap.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid spec file, CLI arguments, or inconsistent run configuration.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (degenerate input, impossible sample, non-convergence).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace loopsampler

#endif
