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

#ifndef LOOPSAMPLER_PERMANENT_HPP
#define LOOPSAMPLER_PERMANENT_HPP

#include "loopsampler/matrix.hpp"

namespace loopsampler {

/// Below this dimension the permanent is evaluated by direct expansion over
/// permutations; at or above, by Ryser's formula with Gray-code updates.
inline constexpr int kPermanentDirectMax = 6;

/// Permanent of a square matrix. Perm of the 0x0 matrix is 1 (empty product).
Complex permanent(const ComplexMatrix& m);

/// Direct O(n * n!) expansion over permutations; exposed for cross-checks.
Complex permanent_direct(const ComplexMatrix& m);

/// Ryser's inclusion-exclusion formula with Gray-code row-sum updates, O(2^n * n).
Complex permanent_ryser(const ComplexMatrix& m);

} // namespace loopsampler

#endif
