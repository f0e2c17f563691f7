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

#ifndef LOOPSAMPLER_VALIDATION_HPP
#define LOOPSAMPLER_VALIDATION_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "loopsampler/fock.hpp"

namespace loopsampler {

/// Two candidate samplers over an identical outcome space.
struct HypothesisPair {
    Distribution dist_a;
    Distribution dist_b;
    std::string label_a;
    std::string label_b;
    bool degenerate = false; // identical distributions (e.g. looped vs unlooped at T=1)
};

/// Sequential posterior P(A) after each processed sample. The likelihood
/// ratio chi is accumulated in the log domain; posterior[k] = chi/(chi+1).
struct ValidationTrajectory {
    std::vector<double> posterior_a;
    double log_chi = 0.0;
    bool clamped = false; // some sample had zero likelihood under exactly one hypothesis

    // Filled by confidence_bands:
    std::vector<double> mean_posterior;
    std::vector<double> band_lower;
    std::vector<double> band_upper;
    double confidence_level = 0.0;
    std::vector<int> crossing_steps; // per sample set, first step with P(A) > threshold; -1 if never
    double crossing_threshold = 0.0;
};

ValidationTrajectory bayesian_trajectory(const SampleSet& samples, const HypothesisPair& pair);

/// Draws n_sets independent sample sets from truth, runs the Bayesian update
/// on each, and reports the per-step mean P(A) with empirical quantile bands.
ValidationTrajectory confidence_bands(const HypothesisPair& pair, const Distribution& truth,
                                      int n_sets, int set_size, double level,
                                      std::uint64_t seed, double crossing_threshold = 0.99);

/// Median of the per-set crossing steps; -1 when the median set never crosses.
int median_crossing_step(const ValidationTrajectory& bands);

/// KL(A||B) over the support of A, in nats.
double kl_divergence(const Distribution& a, const Distribution& b);

/// The four canonical validator pairs, all over the external spatio-temporal
/// modes: quantum vs distinguishable, quantum vs uniform, looped vs unlooped,
/// and phase-averaged looped vs unlooped.
std::vector<HypothesisPair> standard_validators(const InterferometerSpec& spec, int iterations,
                                                int phase_samples, std::uint64_t seed,
                                                std::size_t cap = kDefaultOutcomeCap);

/// Trajectory output: "step mean lower upper" per line, plottable directly.
void write_trajectory(std::ostream& os, const ValidationTrajectory& traj,
                      const std::vector<std::string>& extra_headers = {});
void write_trajectory_file(const std::string& path, const ValidationTrajectory& traj,
                           const std::vector<std::string>& extra_headers = {});

} // namespace loopsampler

#endif
