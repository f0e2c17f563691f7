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

#ifndef LOOPSAMPLER_MATRIX_HPP
#define LOOPSAMPLER_MATRIX_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "loopsampler/errors.hpp"

namespace loopsampler {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Ordered mode-index selection with repetitions, canonically non-decreasing.
class ModeMultiset {
  public:
    ModeMultiset() = default;
    explicit ModeMultiset(std::vector<int> indices);

    /// Expands an occupation vector: mode j appears occ[j] times.
    static ModeMultiset from_occupations(const std::vector<int>& occupations);

    const std::vector<int>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }

  private:
    std::vector<int> indices_;
};

/// Result entry (i,j) = m(row_sel[i], col_sel[j]); repeated indices duplicate rows/columns.
ComplexMatrix submatrix_multiset(const ComplexMatrix& m, const ModeMultiset& row_sel,
                                 const ModeMultiset& col_sel);

/// Haar-distributed unitary via QR of a complex Gaussian matrix, with the
/// R-diagonal made positive-real. Deterministic for a fixed seed.
ComplexMatrix random_unitary(int dim, std::uint64_t seed);

struct IsometryCheck {
    bool passed;
    double deviation; // max |(m^dag m - I)| entry
};

/// Column-orthonormality check for tall matrices (rows >= cols).
IsometryCheck check_isometry(const ComplexMatrix& m, double tol);

/// |Tr(a^dag b)|^2 / (Tr(a^dag a) Tr(b^dag b)), in [0,1].
double matrix_fidelity(const ComplexMatrix& a, const ComplexMatrix& b);

/// Matrix text format: line 1 "rows cols", then rows of "re,im" pairs
/// separated by single spaces, '#' comment lines ignored.
void write_matrix(std::ostream& os, const ComplexMatrix& m);
void write_matrix_file(const std::string& path, const ComplexMatrix& m,
                       const std::string& header_comment = "");
ComplexMatrix read_matrix(std::istream& is);
ComplexMatrix read_matrix_file(const std::string& path);

} // namespace loopsampler

#endif
