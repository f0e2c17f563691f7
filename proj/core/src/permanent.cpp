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

#include "loopsampler/permanent.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace loopsampler {

namespace {

void require_square(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw DimensionError("permanent: matrix must be square, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

} // namespace

Complex permanent_direct(const ComplexMatrix& m) {
    require_square(m);
    const int n = static_cast<int>(m.rows());
    if (n == 0) return Complex(1.0, 0.0);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Complex sum(0.0, 0.0);
    do {
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= m(i, perm[i]);
        sum += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
}

Complex permanent_ryser(const ComplexMatrix& m) {
    require_square(m);
    const int n = static_cast<int>(m.rows());
    if (n == 0) return Complex(1.0, 0.0);

    // Ryser: Perm(A) = (-1)^n sum_{S != 0} (-1)^|S| prod_i sum_{j in S} a_ij.
    // Gray-code iteration updates each row sum by one column per step.
    std::vector<Complex> rowsum(n, Complex(0.0, 0.0));
    Complex total(0.0, 0.0);
    std::uint64_t prev_gray = 0;
    int popcount = 0;
    const std::uint64_t nsubsets = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < nsubsets; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t diff = gray ^ prev_gray;
        const int j = std::countr_zero(diff);
        if (gray & diff) {
            for (int i = 0; i < n; ++i) rowsum[i] += m(i, j);
            ++popcount;
        } else {
            for (int i = 0; i < n; ++i) rowsum[i] -= m(i, j);
            --popcount;
        }
        Complex prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= rowsum[i];
        if ((n - popcount) & 1)
            total -= prod;
        else
            total += prod;
        prev_gray = gray;
    }
    return total;
}

Complex permanent(const ComplexMatrix& m) {
    require_square(m);
    return m.rows() <= kPermanentDirectMax ? permanent_direct(m) : permanent_ryser(m);
}

} // namespace loopsampler
