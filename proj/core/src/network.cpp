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

#include "loopsampler/network.hpp"

#include <cmath>
#include <numbers>

namespace loopsampler {

bool LossModel::is_lossless() const {
    for (double e : input_efficiency)
        if (e != 1.0) return false;
    for (double e : output_efficiency)
        if (e != 1.0) return false;
    return detector_efficiency == 1.0;
}

void InterferometerSpec::validate() const {
    if (modes < 1) throw ConfigError("spec: modes must be >= 1");
    if (loops < 0 || loops >= modes) throw ConfigError("spec: need 0 <= loops < modes");
    if (iterations < 1) throw ConfigError("spec: iterations must be >= 1");
    if (unitary.rows() != modes || unitary.cols() != modes)
        throw ConfigError("spec: unitary must be modes x modes");
    IsometryCheck fwd = check_isometry(unitary, 1e-10);
    IsometryCheck bwd = check_isometry(ComplexMatrix(unitary.adjoint()), 1e-10);
    if (!fwd.passed || !bwd.passed)
        throw ConfigError("spec: matrix is not unitary at 1e-10 (deviation " +
                          std::to_string(std::max(fwd.deviation, bwd.deviation)) + ")");
    if (!random_phases) {
        if (static_cast<int>(feedback_phases.size()) != loops)
            throw ConfigError("spec: feedback_phases length must equal loops");
        for (double p : feedback_phases)
            if (p < 0.0 || p >= 2.0 * std::numbers::pi)
                throw ConfigError("spec: feedback phase outside [0, 2pi)");
    }
    if (static_cast<int>(injection.size()) < iterations)
        throw ConfigError("spec: injection schedule shorter than iterations");
    for (const FockState& s : injection) {
        if (static_cast<int>(s.size()) != external_modes())
            throw ConfigError("spec: each injection entry needs modes-loops components");
        for (int n : s)
            if (n < 0) throw ConfigError("spec: negative occupation in injection");
    }
    for (double e : loss.input_efficiency)
        if (e < 0.0 || e > 1.0) throw ConfigError("spec: input efficiency outside [0,1]");
    for (double e : loss.output_efficiency)
        if (e < 0.0 || e > 1.0) throw ConfigError("spec: output efficiency outside [0,1]");
    if (loss.detector_efficiency < 0.0 || loss.detector_efficiency > 1.0)
        throw ConfigError("spec: detector efficiency outside [0,1]");
    if (!loss.input_efficiency.empty() &&
        static_cast<int>(loss.input_efficiency.size()) != external_modes())
        throw ConfigError("spec: input_efficiency needs modes-loops entries");
    if (!loss.output_efficiency.empty() &&
        static_cast<int>(loss.output_efficiency.size()) != modes)
        throw ConfigError("spec: output_efficiency needs modes entries");
    if (source.indistinguishability < 0.0 || source.indistinguishability > 1.0)
        throw ConfigError("spec: indistinguishability outside [0,1]");
}

BlockPartition partition_unitary(const InterferometerSpec& spec) {
    spec.validate();
    const int e = spec.external_modes();
    const int l = spec.loops;
    BlockPartition b;
    b.u_ee = spec.unitary.topLeftCorner(e, e);
    b.u_el = spec.unitary.topRightCorner(e, l);
    b.u_le = spec.unitary.bottomLeftCorner(l, e);
    b.u_ll = spec.unitary.bottomRightCorner(l, l);
    return b;
}

BlockPartition apply_feedback_phases(const BlockPartition& blocks,
                                     const std::vector<double>& phases) {
    const int l = static_cast<int>(blocks.u_ll.rows());
    if (static_cast<int>(phases.size()) != l)
        throw DimensionError("apply_feedback_phases: expected " + std::to_string(l) +
                             " phases, got " + std::to_string(phases.size()));
    Eigen::VectorXcd d(l);
    for (int i = 0; i < l; ++i) d(i) = std::polar(1.0, phases[i]);
    BlockPartition out = blocks;
    out.u_le = d.asDiagonal() * blocks.u_le;
    out.u_ll = d.asDiagonal() * blocks.u_ll;
    return out;
}

namespace {

// u_el * u_ll^{lag-1} * u_le for lag >= 1.
ComplexMatrix lag_block(const BlockPartition& b, int lag) {
    const int l = static_cast<int>(b.u_ll.rows());
    ComplexMatrix pw = ComplexMatrix::Identity(l, l);
    for (int k = 0; k < lag - 1; ++k) pw = b.u_ll * pw;
    return b.u_el * pw * b.u_le;
}

} // namespace

ComplexMatrix build_total_matrix(const BlockPartition& blocks, int iterations) {
    if (iterations < 1) throw DimensionError("build_total_matrix: iterations must be >= 1");
    const int e = static_cast<int>(blocks.u_ee.rows());
    ComplexMatrix total = ComplexMatrix::Zero(e * iterations, e * iterations);
    // Toeplitz by lag: compute each lag block once.
    for (int lag = 0; lag < iterations; ++lag) {
        ComplexMatrix blk = lag == 0 ? blocks.u_ee : lag_block(blocks, lag);
        for (int t = lag; t < iterations; ++t)
            total.block(t * e, (t - lag) * e, e, e) = blk;
    }
    return total;
}

ComplexMatrix build_extended_matrix(const BlockPartition& blocks, int iterations) {
    if (iterations < 1) throw DimensionError("build_extended_matrix: iterations must be >= 1");
    const int e = static_cast<int>(blocks.u_ee.rows());
    const int l = static_cast<int>(blocks.u_ll.rows());
    ComplexMatrix ext(e * iterations + l, e * iterations);
    ext.topRows(e * iterations) = build_total_matrix(blocks, iterations);
    ComplexMatrix pw = ComplexMatrix::Identity(l, l);
    for (int tp = iterations - 1; tp >= 0; --tp) {
        // block (T, t') = u_ll^{T - t' - 1} u_le with t' 0-based
        ext.block(e * iterations, tp * e, l, e) = pw * blocks.u_le;
        pw = blocks.u_ll * pw;
    }
    return ext;
}

ComplexMatrix build_unlooped_matrix(const BlockPartition& blocks, int iterations) {
    if (iterations < 1) throw DimensionError("build_unlooped_matrix: iterations must be >= 1");
    const int e = static_cast<int>(blocks.u_ee.rows());
    const int l = static_cast<int>(blocks.u_ll.rows());
    ComplexMatrix m = ComplexMatrix::Zero(e * iterations + l * iterations, e * iterations);
    for (int t = 0; t < iterations; ++t) {
        m.block(t * e, t * e, e, e) = blocks.u_ee;
        m.block(e * iterations + t * l, t * e, l, e) = blocks.u_le;
    }
    return m;
}

double fock_space_qubits(long long modes, long long photons) {
    if (photons == 0) return 0.0;
    double ln_dim = std::lgamma(static_cast<double>(modes + photons)) -
                    std::lgamma(static_cast<double>(photons + 1)) -
                    std::lgamma(static_cast<double>(modes));
    return ln_dim / std::numbers::ln2;
}

EffectiveSize effective_size(long long photons_per_iteration, long long modes,
                             long long loops, long long iterations) {
    if (photons_per_iteration < 0 || modes < 0 || loops < 0 || iterations < 0)
        throw DimensionError("effective_size: counts must be non-negative");
    if (loops >= modes) throw DimensionError("effective_size: need loops < modes");
    EffectiveSize s;
    s.photons = photons_per_iteration * iterations;
    s.modes = (modes - loops) * iterations + loops;
    s.qubit_equivalent = fock_space_qubits(s.modes, s.photons);
    return s;
}

EffectiveSize effective_size_total(long long total_photons, long long modes,
                                   long long loops, long long iterations) {
    if (total_photons < 0 || modes < 0 || loops < 0 || iterations < 0)
        throw DimensionError("effective_size: counts must be non-negative");
    if (loops >= modes) throw DimensionError("effective_size: need loops < modes");
    EffectiveSize s;
    s.photons = total_photons;
    s.modes = (modes - loops) * iterations + loops;
    s.qubit_equivalent = fock_space_qubits(s.modes, s.photons);
    return s;
}

} // namespace loopsampler
