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

#ifndef LOOPSAMPLER_TOMOGRAPHY_HPP
#define LOOPSAMPLER_TOMOGRAPHY_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "loopsampler/matrix.hpp"

namespace loopsampler {

/// Two-photon interference visibility record: photons into input pair (i,j),
/// coincidences between output pair (k,l).
struct VisibilityRecord {
    int in_i, in_j, out_k, out_l;
    double value;
};

struct TomographyData {
    RealMatrix moduli; // measured |U|^2 up to losses, rows = outputs
    std::vector<VisibilityRecord> visibilities;
    double noise_level = 0.0;
};

/// V = 1 - Q/C with Q the two-photon coincidence amplitude squared and C the
/// classical coincidence rate. 1 for a full HOM dip, 0 without interference.
double hom_visibility(const ComplexMatrix& u, int i, int j, int k, int l);

/// Synthetic measurement set: lossy moduli with relative Gaussian noise and
/// visibilities over pair_budget random input pairs x all output pairs with
/// absolute Gaussian noise. Degenerate (C = 0) pairs are excluded.
TomographyData synthesize_measurements(const ComplexMatrix& u_true,
                                       const std::vector<double>& input_loss,
                                       const std::vector<double>& output_loss, int pair_budget,
                                       double noise_sigma, std::uint64_t seed);

/// Triangular/rectangular mesh of two-mode rotations with phases plus a
/// diagonal phase layer; exactly dim^2 real parameters, covering U(dim).
struct MeshParameterization {
    int dim = 0;
    std::vector<std::pair<int, int>> gates; // (m, m+1) pairs in application order

    int gate_count() const { return static_cast<int>(gates.size()); }
    int parameter_count() const { return 2 * gate_count() + dim; }
    // params layout: [theta x K][phi x K][alpha x dim]
    ComplexMatrix build(const Eigen::VectorXd& params) const;
};

MeshParameterization make_mesh(int dim);

/// Weighted least-squares objective over moduli and visibility residuals.
/// When grad is non-null it is filled with the analytic gradient (same layout
/// as params; loss parameters appended when fit_losses is set).
double tomography_objective(const TomographyData& data, const MeshParameterization& mesh,
                            const Eigen::VectorXd& params, double lambda, bool fit_losses,
                            Eigen::VectorXd* grad);

struct ReconstructConfig {
    int max_iterations = 3000;
    int restarts = 8;
    double lambda = 1.0;       // visibility residual weight
    bool fit_losses = false;
    bool analytic_gradient = true; // false: central finite differences
    double learning_rate = 0.05;
    std::uint64_t seed = 1;
};

struct ReconstructionResult {
    ComplexMatrix unitary_estimate; // gauge-fixed
    std::vector<double> input_loss;
    std::vector<double> output_loss;
    double objective = 0.0;
    double visibility_mae = 0.0;  // on the fitted records
    double moduli_fidelity = 0.0; // predicted vs measured module matrices
    bool converged = false;
};

ReconstructionResult reconstruct(const TomographyData& data, const ReconstructConfig& config);

struct EvaluationMetrics {
    double moduli_fidelity;       // F(|u_est|, |u_true|)
    double complex_fidelity;      // after gauge fixing (conjugation ambiguity resolved)
    double visibility_mae;        // over a held-out record set
};

EvaluationMetrics evaluate_reconstruction(const ReconstructionResult& result,
                                          const ComplexMatrix& u_true,
                                          const std::vector<VisibilityRecord>& holdout);

/// Left/right diagonal phases chosen so the first row and column are
/// non-negative real.
ComplexMatrix gauge_fix(const ComplexMatrix& u);

// --- persistence ------------------------------------------------------------

void write_visibilities(std::ostream& os, const std::vector<VisibilityRecord>& records);
void write_visibilities_file(const std::string& path, const std::vector<VisibilityRecord>& records);
std::vector<VisibilityRecord> read_visibilities(std::istream& is);
std::vector<VisibilityRecord> read_visibilities_file(const std::string& path);

void write_reconstruction_file(const std::string& path, const ReconstructionResult& result,
                               const std::vector<std::string>& extra_headers = {});

} // namespace loopsampler

#endif
