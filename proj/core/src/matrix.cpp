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

#include "loopsampler/matrix.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace loopsampler {

ModeMultiset::ModeMultiset(std::vector<int> indices) : indices_(std::move(indices)) {
    std::sort(indices_.begin(), indices_.end());
}

ModeMultiset ModeMultiset::from_occupations(const std::vector<int>& occupations) {
    std::vector<int> idx;
    for (std::size_t j = 0; j < occupations.size(); ++j) {
        for (int r = 0; r < occupations[j]; ++r) idx.push_back(static_cast<int>(j));
    }
    return ModeMultiset(std::move(idx));
}

ComplexMatrix submatrix_multiset(const ComplexMatrix& m, const ModeMultiset& row_sel,
                                 const ModeMultiset& col_sel) {
    for (int r : row_sel.indices()) {
        if (r < 0 || r >= m.rows())
            throw BoundsError("submatrix_multiset: row index " + std::to_string(r) +
                              " out of range for " + std::to_string(m.rows()) + " rows");
    }
    for (int c : col_sel.indices()) {
        if (c < 0 || c >= m.cols())
            throw BoundsError("submatrix_multiset: column index " + std::to_string(c) +
                              " out of range for " + std::to_string(m.cols()) + " cols");
    }
    ComplexMatrix out(row_sel.size(), col_sel.size());
    for (std::size_t i = 0; i < row_sel.size(); ++i)
        for (std::size_t j = 0; j < col_sel.size(); ++j)
            out(i, j) = m(row_sel.indices()[i], col_sel.indices()[j]);
    return out;
}

ComplexMatrix random_unitary(int dim, std::uint64_t seed) {
    if (dim < 1) throw DimensionError("random_unitary: dim must be >= 1");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(dist(gen), dist(gen));

    Eigen::HouseholderQR<ComplexMatrix> qr(a);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity of QR: make diag(R) positive real so the
    // distribution is actually Haar.
    for (int j = 0; j < dim; ++j) {
        Complex d = r(j, j);
        double mag = std::abs(d);
        Complex phase = mag > 0 ? d / mag : Complex(1, 0);
        q.col(j) *= phase;
    }
    return q;
}

IsometryCheck check_isometry(const ComplexMatrix& m, double tol) {
    if (m.rows() < m.cols())
        throw DimensionError("check_isometry: expected rows >= cols (tall isometry)");
    ComplexMatrix g = m.adjoint() * m;
    g -= ComplexMatrix::Identity(m.cols(), m.cols());
    double dev = g.cwiseAbs().maxCoeff();
    return {dev <= tol, dev};
}

double matrix_fidelity(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("matrix_fidelity: shape mismatch");
    double na = (a.adjoint() * a).trace().real();
    double nb = (b.adjoint() * b).trace().real();
    if (na <= 0.0 || nb <= 0.0)
        throw NumericalError("matrix_fidelity: zero matrix argument");
    Complex overlap = (a.adjoint() * b).trace();
    return std::norm(overlap) / (na * nb);
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
    os << m.rows() << " " << m.cols() << "\n";
    os << std::setprecision(17);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << " ";
            os << m(i, j).real() << "," << m(i, j).imag();
        }
        os << "\n";
    }
}

void write_matrix_file(const std::string& path, const ComplexMatrix& m,
                       const std::string& header_comment) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    if (!header_comment.empty()) os << "# " << header_comment << "\n";
    write_matrix(os, m);
}

ComplexMatrix read_matrix(std::istream& is) {
    std::string line;
    auto next_data_line = [&](std::string& out) {
        while (std::getline(is, out)) {
            std::size_t pos = out.find_first_not_of(" \t\r");
            if (pos == std::string::npos) continue;
            if (out[pos] == '#') continue;
            return true;
        }
        return false;
    };
    if (!next_data_line(line)) throw ConfigError("matrix file: missing header line");
    std::istringstream hdr(line);
    long rows = -1, cols = -1;
    hdr >> rows >> cols;
    if (rows < 0 || cols < 0) throw ConfigError("matrix file: bad 'rows cols' header");
    ComplexMatrix m(rows, cols);
    for (long i = 0; i < rows; ++i) {
        if (!next_data_line(line)) throw ConfigError("matrix file: truncated at row " + std::to_string(i));
        std::istringstream row(line);
        std::string tok;
        for (long j = 0; j < cols; ++j) {
            if (!(row >> tok)) throw ConfigError("matrix file: short row " + std::to_string(i));
            std::size_t comma = tok.find(',');
            if (comma == std::string::npos)
                throw ConfigError("matrix file: entry missing ',' separator: " + tok);
            m(i, j) = Complex(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
        }
    }
    return m;
}

ComplexMatrix read_matrix_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open matrix file: " + path);
    return read_matrix(is);
}

} // namespace loopsampler
