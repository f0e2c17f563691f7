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

#ifndef LOOPSAMPLER_FOCK_HPP
#define LOOPSAMPLER_FOCK_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "loopsampler/network.hpp"
#include "loopsampler/permanent.hpp"

namespace loopsampler {

enum class SamplerKind { Quantum, Distinguishable, Uniform };
enum class FeedbackKind { Looped, Unlooped };

std::string to_string(SamplerKind k);
std::string to_string(FeedbackKind f);
SamplerKind sampler_kind_from_string(const std::string& s);
FeedbackKind feedback_kind_from_string(const std::string& s);

struct DistributionMeta {
    SamplerKind kind = SamplerKind::Quantum;
    FeedbackKind feedback = FeedbackKind::Looped;
    int iterations = 1;
    std::string marginalization; // empty = none
};

/// Normalized map from Fock outcomes to probabilities. Support is kept
/// sorted in ascending lexicographic order of the occupation vectors.
struct Distribution {
    std::vector<std::pair<FockState, double>> support;
    DistributionMeta meta;
    std::vector<double> std_error; // empty, or one entry per outcome (phase averaging)

    int mode_count() const;
    double probability_of(const FockState& s) const; // 0 when absent
    double total() const;
    void sort_support();
};

inline constexpr std::size_t kDefaultOutcomeCap = 2'000'000;

/// All C(modes+photons-1, photons) occupation vectors, first mode count
/// descending (so (1,0) precedes (0,1)).
std::vector<FockState> enumerate_fock_states(int modes, int photons);
long long fock_state_count(long long modes, long long photons);

int total_photons(const FockState& s);

/// Single-event probability through a transfer matrix whose columns index
/// input modes and rows output modes.
double event_probability(const ComplexMatrix& transfer, const FockState& input,
                         const FockState& output, SamplerKind kind);

/// Exact output distribution over all total-photon-conserving outcomes of
/// the spatio-temporal transfer matrix (extended looped, or blocked-feedback).
Distribution full_distribution(const InterferometerSpec& spec, int iterations,
                               SamplerKind kind, FeedbackKind feedback = FeedbackKind::Looped,
                               std::size_t cap = kDefaultOutcomeCap);

/// Sums out every mode not listed in keep_modes (indices into the
/// distribution's mode space, strictly increasing).
Distribution marginalize(const Distribution& dist, const std::vector<int>& keep_modes);

/// Marginal over the first external_count modes (drops trailing looped modes).
Distribution external_marginal(const Distribution& dist, int external_count);

/// Marginal over the external modes of one iteration (0-based).
Distribution iteration_marginal(const Distribution& dist, const InterferometerSpec& spec,
                                int iteration);

/// Bernoulli input loss (mixture over photon survival subsets) followed by
/// binomial detection thinning per output mode. Result covers detected
/// patterns of every photon total up to NT.
Distribution apply_loss(const Distribution& dist, const LossModel& loss,
                        const InterferometerSpec& spec, int iterations,
                        std::size_t cap = kDefaultOutcomeCap);

/// Partial-indistinguishability model: each subset S of the injected photons
/// interferes as one quantum group with weight p^|S| (1-p)^(N-|S|), the
/// remaining photons acting as mutually distinguishable singles.
Distribution mix_distinguishability(const InterferometerSpec& spec, int iterations, double p,
                                    std::size_t cap = kDefaultOutcomeCap);

/// Monte-Carlo average of full_distribution over draws of the feedback
/// phases, uniform on [0,2pi)^L. std_error holds per-outcome standard errors.
Distribution phase_average(const InterferometerSpec& spec, int iterations, int draws,
                           std::uint64_t seed, SamplerKind kind,
                           FeedbackKind feedback = FeedbackKind::Looped,
                           std::size_t cap = kDefaultOutcomeCap);

struct SampleSet {
    std::vector<FockState> samples;
    std::uint64_t seed = 0;
    DistributionMeta source_metadata;
};

/// Inverse-CDF draws over the enumerated support, deterministic per seed.
SampleSet draw_samples(const Distribution& dist, int n, std::uint64_t seed);

/// Independent dense-Fock oracle: expands the multi-photon input through the
/// mode transformation monomial-by-monomial, no permanents involved.
Distribution oracle_distribution(const ComplexMatrix& transfer, const FockState& input,
                                 std::size_t amplitude_cap = 100000);

/// 0.5 * sum |p - q| over the union of both supports.
double total_variation(const Distribution& a, const Distribution& b);

// --- persistence ------------------------------------------------------------

void write_distribution(std::ostream& os, const Distribution& dist,
                        const std::vector<std::string>& extra_headers = {});
void write_distribution_file(const std::string& path, const Distribution& dist,
                             const std::vector<std::string>& extra_headers = {});
Distribution read_distribution(std::istream& is);
Distribution read_distribution_file(const std::string& path);

void write_samples(std::ostream& os, const SampleSet& set,
                   const std::vector<std::string>& extra_headers = {});
void write_samples_file(const std::string& path, const SampleSet& set,
                        const std::vector<std::string>& extra_headers = {});
SampleSet read_samples(std::istream& is);
SampleSet read_samples_file(const std::string& path);

} // namespace loopsampler

#endif
