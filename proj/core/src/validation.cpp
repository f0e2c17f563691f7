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

#include "loopsampler/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>

#include "loopsampler/parallel.hpp"

namespace loopsampler {

namespace {

double posterior_from_log_chi(double log_chi) {
    if (std::isinf(log_chi)) return log_chi > 0 ? 1.0 : 0.0;
    // chi/(chi+1) computed stably in both tails
    if (log_chi >= 0) return 1.0 / (1.0 + std::exp(-log_chi));
    double chi = std::exp(log_chi);
    return chi / (chi + 1.0);
}

} // namespace

ValidationTrajectory bayesian_trajectory(const SampleSet& samples, const HypothesisPair& pair) {
    ValidationTrajectory traj;
    traj.posterior_a.reserve(samples.samples.size());
    double log_chi = 0.0; // prior P(A) = P(B) = 0.5
    for (const FockState& s : samples.samples) {
        double pa = pair.dist_a.probability_of(s);
        double pb = pair.dist_b.probability_of(s);
        if (pa == 0.0 && pb == 0.0)
            throw NumericalError("bayesian_trajectory: sample impossible under both hypotheses");
        if (pa == 0.0 || pb == 0.0) {
            double next = pa == 0.0 ? -std::numeric_limits<double>::infinity()
                                    : std::numeric_limits<double>::infinity();
            if (std::isinf(log_chi) && std::signbit(log_chi) != std::signbit(next))
                throw NumericalError(
                    "bayesian_trajectory: data impossible under both hypotheses across samples");
            log_chi = next;
            traj.clamped = true;
        } else if (!std::isinf(log_chi)) {
            log_chi += std::log(pa) - std::log(pb);
        }
        traj.posterior_a.push_back(posterior_from_log_chi(log_chi));
    }
    traj.log_chi = log_chi;
    return traj;
}

ValidationTrajectory confidence_bands(const HypothesisPair& pair, const Distribution& truth,
                                      int n_sets, int set_size, double level, std::uint64_t seed,
                                      double crossing_threshold) {
    if (n_sets < 2) throw ConfigError("confidence_bands: need at least 2 sample sets");
    if (level <= 0.0 || level >= 1.0) throw ConfigError("confidence_bands: level must be in (0,1)");

    std::vector<std::uint64_t> subseeds(n_sets);
    std::mt19937_64 gen(seed);
    for (auto& s : subseeds) s = gen();

    std::vector<std::vector<double>> posteriors(n_sets);
    std::vector<int> crossings(n_sets, -1);
    parallel_for_chunks(n_sets, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            SampleSet set = draw_samples(truth, set_size, subseeds[k]);
            ValidationTrajectory t = bayesian_trajectory(set, pair);
            for (int step = 0; step < set_size; ++step) {
                if (t.posterior_a[step] > crossing_threshold) {
                    crossings[k] = step + 1;
                    break;
                }
            }
            posteriors[k] = std::move(t.posterior_a);
        }
    });

    ValidationTrajectory out;
    out.confidence_level = level;
    out.crossing_threshold = crossing_threshold;
    out.crossing_steps = std::move(crossings);
    out.mean_posterior.resize(set_size);
    out.band_lower.resize(set_size);
    out.band_upper.resize(set_size);
    const double qlo = (1.0 - level) / 2.0;
    const double qhi = 1.0 - qlo;
    std::vector<double> column(n_sets);
    for (int step = 0; step < set_size; ++step) {
        double mean = 0.0;
        for (int k = 0; k < n_sets; ++k) {
            column[k] = posteriors[k][step];
            mean += column[k];
        }
        out.mean_posterior[step] = mean / n_sets;
        std::sort(column.begin(), column.end());
        auto quantile = [&](double q) {
            double idx = q * (n_sets - 1);
            std::size_t lo = static_cast<std::size_t>(idx);
            std::size_t hi = std::min<std::size_t>(lo + 1, n_sets - 1);
            double frac = idx - lo;
            return column[lo] * (1.0 - frac) + column[hi] * frac;
        };
        out.band_lower[step] = quantile(qlo);
        out.band_upper[step] = quantile(qhi);
    }
    return out;
}

int median_crossing_step(const ValidationTrajectory& bands) {
    std::vector<double> steps;
    steps.reserve(bands.crossing_steps.size());
    for (int c : bands.crossing_steps)
        steps.push_back(c < 0 ? std::numeric_limits<double>::infinity() : c);
    if (steps.empty()) return -1;
    std::sort(steps.begin(), steps.end());
    double med = steps[steps.size() / 2];
    return std::isinf(med) ? -1 : static_cast<int>(med);
}

double kl_divergence(const Distribution& a, const Distribution& b) {
    double kl = 0.0;
    for (const auto& [s, p] : a.support) {
        if (p == 0.0) continue;
        double q = b.probability_of(s);
        if (q == 0.0) return std::numeric_limits<double>::infinity();
        kl += p * std::log(p / q);
    }
    return kl;
}

std::vector<HypothesisPair> standard_validators(const InterferometerSpec& spec, int iterations,
                                                int phase_samples, std::uint64_t seed,
                                                std::size_t cap) {
    spec.validate();
    const int ext = spec.external_modes() * iterations;

    InterferometerSpec fixed = spec;
    if (spec.random_phases) {
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
        fixed.random_phases = false;
        fixed.feedback_phases.resize(spec.loops);
        for (int i = 0; i < spec.loops; ++i) fixed.feedback_phases[i] = angle(gen);
    }

    Distribution q_loop = external_marginal(
        full_distribution(fixed, iterations, SamplerKind::Quantum, FeedbackKind::Looped, cap), ext);
    Distribution d_loop = external_marginal(
        full_distribution(fixed, iterations, SamplerKind::Distinguishable, FeedbackKind::Looped, cap),
        ext);
    Distribution u_loop = external_marginal(
        full_distribution(fixed, iterations, SamplerKind::Uniform, FeedbackKind::Looped, cap), ext);
    Distribution q_unloop = external_marginal(
        full_distribution(fixed, iterations, SamplerKind::Quantum, FeedbackKind::Unlooped, cap), ext);
    Distribution q_loop_avg = external_marginal(
        phase_average(spec, iterations, phase_samples, seed + 1, SamplerKind::Quantum,
                      FeedbackKind::Looped, cap),
        ext);

    std::vector<HypothesisPair> pairs;
    pairs.push_back({q_loop, d_loop, "quantum", "distinguishable", false});
    pairs.push_back({q_loop, u_loop, "quantum", "uniform", false});
    pairs.push_back({q_loop, q_unloop, "looped", "unlooped", false});
    // Blocked feedback has no loop traversal, so its distribution is
    // phase-independent and needs no averaging.
    pairs.push_back({q_loop_avg, q_unloop, "looped-phase-avg", "unlooped", false});
    for (HypothesisPair& p : pairs)
        p.degenerate = total_variation(p.dist_a, p.dist_b) < 1e-12;
    return pairs;
}

void write_trajectory(std::ostream& os, const ValidationTrajectory& traj,
                      const std::vector<std::string>& extra_headers) {
    for (const std::string& h : extra_headers) os << "# " << h << "\n";
    os << std::setprecision(17);
    if (!traj.mean_posterior.empty()) {
        os << "# columns=step mean_posterior band_lower band_upper\n";
        os << "# level=" << traj.confidence_level << "\n";
        for (std::size_t i = 0; i < traj.mean_posterior.size(); ++i)
            os << (i + 1) << " " << traj.mean_posterior[i] << " " << traj.band_lower[i] << " "
               << traj.band_upper[i] << "\n";
    } else {
        os << "# columns=step posterior\n";
        for (std::size_t i = 0; i < traj.posterior_a.size(); ++i)
            os << (i + 1) << " " << traj.posterior_a[i] << "\n";
    }
}

void write_trajectory_file(const std::string& path, const ValidationTrajectory& traj,
                           const std::vector<std::string>& extra_headers) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    write_trajectory(os, traj, extra_headers);
}

} // namespace loopsampler
