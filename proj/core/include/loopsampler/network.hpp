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

#ifndef LOOPSAMPLER_NETWORK_HPP
#define LOOPSAMPLER_NETWORK_HPP

#include <vector>

#include "loopsampler/matrix.hpp"

namespace loopsampler {

using FockState = std::vector<int>;

/// Per-mode transmission model: input efficiencies over the M-L external
/// input modes, output efficiencies over all M physical output modes
/// (external first, looped last), and a scalar detector efficiency.
struct LossModel {
    std::vector<double> input_efficiency;
    std::vector<double> output_efficiency;
    double detector_efficiency = 1.0;

    bool is_lossless() const;
};

struct SourceModel {
    double indistinguishability = 1.0;
    double g2 = 0.0; // recorded for reporting, not simulated
};

/// Full device description: an M-mode interferometer whose last L output
/// modes feed back into its last L input modes with one-iteration delay.
struct InterferometerSpec {
    int modes = 0;      // M
    int loops = 0;      // L
    int iterations = 1; // T
    ComplexMatrix unitary;
    std::vector<double> feedback_phases; // length L
    bool random_phases = false;
    std::vector<FockState> injection; // per-iteration occupations over M-L external modes
    LossModel loss;
    SourceModel source;

    int external_modes() const { return modes - loops; }
    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

/// 2x2 block partition of U by (external, looped) input/output modes.
struct BlockPartition {
    ComplexMatrix u_ee; // (M-L) x (M-L), external -> external
    ComplexMatrix u_el; // (M-L) x L,     looped inputs -> external outputs
    ComplexMatrix u_le; // L x (M-L),     external inputs -> looped outputs
    ComplexMatrix u_ll; // L x L,         looped -> looped
};

BlockPartition partition_unitary(const InterferometerSpec& spec);

/// Folds the per-loop fiber phases into the blocks: with D = diag(e^{i phi}),
/// u_le -> D u_le and u_ll -> D u_ll.
BlockPartition apply_feedback_phases(const BlockPartition& blocks,
                                     const std::vector<double>& phases);

/// The (M-L)T x (M-L)T spatio-temporal transfer matrix: block (t,t') is
/// u_ee on the diagonal, u_el u_ll^{t-t'-1} u_le below it, zero above.
ComplexMatrix build_total_matrix(const BlockPartition& blocks, int iterations);

/// build_total_matrix with L extra rows for the unlooped-at-the-end modes,
/// final-row block (T,t') = u_ll^{T-t'} u_le; a [(M-L)T+L] x (M-L)T isometry.
ComplexMatrix build_extended_matrix(const BlockPartition& blocks, int iterations);

/// Transfer matrix of the same device with the feedback lines blocked:
/// each iteration acts independently. Rows are ordered external modes for
/// iterations 1..T first, then the L looped output modes of each iteration.
/// Shape M*T x (M-L)T, an isometry.
ComplexMatrix build_unlooped_matrix(const BlockPartition& blocks, int iterations);

struct EffectiveSize {
    long long photons;
    long long modes;
    double qubit_equivalent; // log2 of the bosonic Fock-space dimension
};

/// N photons over T iterations of an (M,L) looped device are equivalent to
/// N*T photons in (M-L)*T + L modes.
EffectiveSize effective_size(long long photons_per_iteration, long long modes,
                             long long loops, long long iterations);

/// Same, but with the total detected photon count given directly (detected
/// totals need not be a multiple of the iteration count under loss).
EffectiveSize effective_size_total(long long total_photons, long long modes,
                                   long long loops, long long iterations);

/// log2 C(modes + photons - 1, photons), via lgamma.
double fock_space_qubits(long long modes, long long photons);

} // namespace loopsampler

#endif
