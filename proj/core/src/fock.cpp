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

#include "loopsampler/fock.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "loopsampler/parallel.hpp"

namespace loopsampler {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double occupation_factorial_product(const FockState& s) {
    double f = 1.0;
    for (int n : s) f *= factorial(n);
    return f;
}

void enumerate_rec(int modes, int photons, FockState& prefix, std::vector<FockState>& out) {
    if (modes == 1) {
        prefix.push_back(photons);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int n = photons; n >= 0; --n) {
        prefix.push_back(n);
        enumerate_rec(modes - 1, photons - n, prefix, out);
        prefix.pop_back();
    }
}

/// Spatio-temporal transfer matrix of the spec with phases folded in.
ComplexMatrix spec_transfer(const InterferometerSpec& spec, int iterations,
                            FeedbackKind feedback) {
    if (spec.random_phases)
        throw ConfigError("spec has feedback_phases=random; draw phases first (phase_average)");
    BlockPartition blocks = partition_unitary(spec);
    if (spec.loops > 0) blocks = apply_feedback_phases(blocks, spec.feedback_phases);
    return feedback == FeedbackKind::Looped ? build_extended_matrix(blocks, iterations)
                                            : build_unlooped_matrix(blocks, iterations);
}

FockState concat_injection(const InterferometerSpec& spec, int iterations) {
    FockState input;
    for (int t = 0; t < iterations; ++t)
        input.insert(input.end(), spec.injection[t].begin(), spec.injection[t].end());
    return input;
}

Distribution from_map(std::map<FockState, double> acc, DistributionMeta meta) {
    Distribution d;
    d.meta = std::move(meta);
    d.support.assign(acc.begin(), acc.end());
    return d;
}

Distribution convolve(const Distribution& a, const Distribution& b) {
    std::map<FockState, double> acc;
    for (const auto& [sa, pa] : a.support) {
        if (pa == 0.0) continue;
        for (const auto& [sb, pb] : b.support) {
            if (pb == 0.0) continue;
            FockState sum = sa;
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += sb[i];
            acc[sum] += pa * pb;
        }
    }
    return from_map(std::move(acc), a.meta);
}

/// Distribution of one photon injected into column c.
Distribution single_photon_distribution(const ComplexMatrix& transfer, int column) {
    Distribution d;
    const int rows = static_cast<int>(transfer.rows());
    for (int r = 0; r < rows; ++r) {
        double p = std::norm(transfer(r, column));
        if (p == 0.0) continue;
        FockState s(rows, 0);
        s[r] = 1;
        d.support.emplace_back(std::move(s), p);
    }
    d.sort_support();
    return d;
}

Distribution quantum_group_distribution(const ComplexMatrix& transfer, const FockState& input,
                                        std::size_t cap) {
    const int rows = static_cast<int>(transfer.rows());
    const int n = total_photons(input);
    long long count = fock_state_count(rows, n);
    if (count > static_cast<long long>(cap))
        throw ResourceError("outcome count " + std::to_string(count) + " exceeds cap");
    Distribution d;
    for (FockState& out : enumerate_fock_states(rows, n)) {
        double p = event_probability(transfer, input, out, SamplerKind::Quantum);
        d.support.emplace_back(std::move(out), p);
    }
    d.sort_support();
    return d;
}

} // namespace

std::string to_string(SamplerKind k) {
    switch (k) {
        case SamplerKind::Quantum: return "quantum";
        case SamplerKind::Distinguishable: return "distinguishable";
        case SamplerKind::Uniform: return "uniform";
    }
    return "?";
}

std::string to_string(FeedbackKind f) {
    return f == FeedbackKind::Looped ? "looped" : "unlooped";
}

SamplerKind sampler_kind_from_string(const std::string& s) {
    if (s == "quantum") return SamplerKind::Quantum;
    if (s == "distinguishable") return SamplerKind::Distinguishable;
    if (s == "uniform") return SamplerKind::Uniform;
    throw ConfigError("unknown sampler kind: " + s);
}

FeedbackKind feedback_kind_from_string(const std::string& s) {
    if (s == "looped") return FeedbackKind::Looped;
    if (s == "unlooped") return FeedbackKind::Unlooped;
    throw ConfigError("unknown feedback kind: " + s);
}

int Distribution::mode_count() const {
    return support.empty() ? 0 : static_cast<int>(support.front().first.size());
}

double Distribution::probability_of(const FockState& s) const {
    auto it = std::lower_bound(support.begin(), support.end(), s,
                               [](const auto& entry, const FockState& key) {
                                   return entry.first < key;
                               });
    if (it == support.end() || it->first != s) return 0.0;
    return it->second;
}

double Distribution::total() const {
    double t = 0.0;
    for (const auto& [s, p] : support) t += p;
    return t;
}

void Distribution::sort_support() {
    std::sort(support.begin(), support.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

std::vector<FockState> enumerate_fock_states(int modes, int photons) {
    if (modes < 1) throw DimensionError("enumerate_fock_states: modes must be >= 1");
    if (photons < 0) throw DimensionError("enumerate_fock_states: photons must be >= 0");
    std::vector<FockState> out;
    out.reserve(static_cast<std::size_t>(fock_state_count(modes, photons)));
    FockState prefix;
    enumerate_rec(modes, photons, prefix, out);
    return out;
}

long long fock_state_count(long long modes, long long photons) {
    // C(modes + photons - 1, photons), exact in integer arithmetic
    long long n = modes + photons - 1;
    long long k = std::min(photons, n - photons);
    long long c = 1;
    for (long long i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

int total_photons(const FockState& s) {
    int n = 0;
    for (int v : s) n += v;
    return n;
}

double event_probability(const ComplexMatrix& transfer, const FockState& input,
                         const FockState& output, SamplerKind kind) {
    if (static_cast<int>(input.size()) != transfer.cols())
        throw DimensionError("event_probability: input length != transfer columns");
    if (static_cast<int>(output.size()) != transfer.rows())
        throw DimensionError("event_probability: output length != transfer rows");
    if (total_photons(input) != total_photons(output))
        throw NumericalError("event_probability: photon number not conserved");
    ModeMultiset rows = ModeMultiset::from_occupations(output);
    ModeMultiset cols = ModeMultiset::from_occupations(input);
    ComplexMatrix a = submatrix_multiset(transfer, rows, cols);
    switch (kind) {
        case SamplerKind::Quantum: {
            double norm = occupation_factorial_product(input) * occupation_factorial_product(output);
            return std::norm(permanent(a)) / norm;
        }
        case SamplerKind::Distinguishable: {
            ComplexMatrix abs2 = a.cwiseAbs2().cast<Complex>();
            return permanent(abs2).real() / occupation_factorial_product(output);
        }
        case SamplerKind::Uniform:
            throw ConfigError("event_probability: uniform kind has no per-event law");
    }
    return 0.0;
}

Distribution full_distribution(const InterferometerSpec& spec, int iterations, SamplerKind kind,
                               FeedbackKind feedback, std::size_t cap) {
    spec.validate();
    if (static_cast<int>(spec.injection.size()) < iterations)
        throw ConfigError("full_distribution: injection schedule shorter than iterations");
    ComplexMatrix transfer = spec_transfer(spec, iterations, feedback);
    FockState input = concat_injection(spec, iterations);
    const int n = total_photons(input);
    const int rows = static_cast<int>(transfer.rows());
    long long count = fock_state_count(rows, n);
    if (count > static_cast<long long>(cap))
        throw ResourceError("outcome count " + std::to_string(count) + " exceeds cap " +
                            std::to_string(cap));

    Distribution d;
    d.meta = {kind, feedback, iterations, ""};
    std::vector<FockState> outcomes = enumerate_fock_states(rows, n);
    d.support.resize(outcomes.size());
    if (kind == SamplerKind::Uniform) {
        const double p = 1.0 / static_cast<double>(outcomes.size());
        for (std::size_t i = 0; i < outcomes.size(); ++i)
            d.support[i] = {std::move(outcomes[i]), p};
    } else {
        auto* entries = d.support.data();
        parallel_for_chunks(outcomes.size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                double p = event_probability(transfer, input, outcomes[i], kind);
                entries[i] = {outcomes[i], p};
            }
        });
    }
    d.sort_support();
    return d;
}

Distribution marginalize(const Distribution& dist, const std::vector<int>& keep_modes) {
    if (keep_modes.empty()) throw ConfigError("marginalize: empty keep set");
    const int m = dist.mode_count();
    for (int k : keep_modes)
        if (k < 0 || k >= m) throw BoundsError("marginalize: mode index out of range");
    std::map<FockState, double> acc;
    for (const auto& [s, p] : dist.support) {
        FockState kept(keep_modes.size());
        for (std::size_t i = 0; i < keep_modes.size(); ++i) kept[i] = s[keep_modes[i]];
        acc[kept] += p;
    }
    DistributionMeta meta = dist.meta;
    std::ostringstream rec;
    rec << "kept";
    for (int k : keep_modes) rec << " " << k;
    meta.marginalization = meta.marginalization.empty()
                               ? rec.str()
                               : meta.marginalization + "; " + rec.str();
    return from_map(std::move(acc), std::move(meta));
}

Distribution external_marginal(const Distribution& dist, int external_count) {
    std::vector<int> keep(external_count);
    for (int i = 0; i < external_count; ++i) keep[i] = i;
    return marginalize(dist, keep);
}

Distribution iteration_marginal(const Distribution& dist, const InterferometerSpec& spec,
                                int iteration) {
    const int e = spec.external_modes();
    std::vector<int> keep(e);
    for (int i = 0; i < e; ++i) keep[i] = iteration * e + i;
    return marginalize(dist, keep);
}

Distribution apply_loss(const Distribution& dist, const LossModel& loss,
                        const InterferometerSpec& spec, int iterations, std::size_t cap) {
    if (loss.is_lossless()) return dist;
    if (dist.meta.kind == SamplerKind::Uniform)
        throw ConfigError("apply_loss: loss on a uniform sampler is undefined");
    if (!dist.meta.marginalization.empty())
        throw ConfigError("apply_loss: expected a pre-loss, unmarginalized distribution");

    const int e = spec.external_modes();
    auto input_eff = [&](int ext_mode) {
        return loss.input_efficiency.empty() ? 1.0 : loss.input_efficiency[ext_mode];
    };

    // Mixture over photon survival subsets at the inputs.
    struct Term {
        std::vector<FockState> schedule;
        double weight;
    };
    std::vector<std::pair<int, int>> photons; // (iteration, external mode), one per photon
    for (int t = 0; t < iterations; ++t)
        for (int j = 0; j < e; ++j)
            for (int r = 0; r < spec.injection[t][j]; ++r) photons.emplace_back(t, j);
    const int n = static_cast<int>(photons.size());

    std::map<std::vector<FockState>, double> survivors;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        double w = 1.0;
        std::vector<FockState> schedule(iterations, FockState(e, 0));
        for (int i = 0; i < n; ++i) {
            const double eta = input_eff(photons[i].second);
            if (mask & (std::uint64_t(1) << i)) {
                w *= eta;
                schedule[photons[i].first][photons[i].second] += 1;
            } else {
                w *= 1.0 - eta;
            }
        }
        if (w > 0.0) survivors[schedule] += w;
    }

    // Detection probability per spatio-temporal output mode.
    ComplexMatrix transfer = spec_transfer(spec, iterations, dist.meta.feedback);
    const int rows = static_cast<int>(transfer.rows());
    auto output_eff = [&](int phys_mode) {
        return loss.output_efficiency.empty() ? 1.0 : loss.output_efficiency[phys_mode];
    };
    std::vector<double> detect(rows);
    for (int r = 0; r < rows; ++r) {
        int phys;
        if (r < e * iterations) {
            phys = r % e;
        } else if (dist.meta.feedback == FeedbackKind::Looped) {
            phys = e + (r - e * iterations);
        } else {
            phys = e + (r - e * iterations) % spec.loops;
        }
        detect[r] = output_eff(phys) * loss.detector_efficiency;
    }

    std::map<FockState, double> acc;
    // Recursive binomial thinning of one pre-loss outcome into detected patterns.
    auto thin = [&](const FockState& s, double prob) {
        FockState det(s.size(), 0);
        auto rec = [&](auto&& self, std::size_t mode, double w) -> void {
            if (w == 0.0) return;
            if (mode == s.size()) {
                acc[det] += prob * w;
                return;
            }
            const int occ = s[mode];
            const double q = detect[mode];
            for (int k = 0; k <= occ; ++k) {
                double binom = factorial(occ) / (factorial(k) * factorial(occ - k)) *
                               std::pow(q, k) * std::pow(1.0 - q, occ - k);
                det[mode] = k;
                self(self, mode + 1, w * binom);
            }
            det[mode] = 0;
        };
        rec(rec, 0, 1.0);
    };

    for (const auto& [schedule, weight] : survivors) {
        InterferometerSpec sub = spec;
        sub.injection = schedule;
        sub.loss = LossModel{}; // losses handled here
        Distribution pre = full_distribution(sub, iterations, dist.meta.kind,
                                             dist.meta.feedback, cap);
        for (const auto& [s, p] : pre.support) {
            if (p == 0.0) continue;
            thin(s, weight * p);
        }
    }

    DistributionMeta meta = dist.meta;
    meta.marginalization = "lossy";
    return from_map(std::move(acc), std::move(meta));
}

Distribution mix_distinguishability(const InterferometerSpec& spec, int iterations, double p,
                                    std::size_t cap) {
    if (p < 0.0 || p > 1.0) throw ConfigError("mix_distinguishability: p outside [0,1]");
    spec.validate();
    ComplexMatrix transfer = spec_transfer(spec, iterations, FeedbackKind::Looped);
    FockState input = concat_injection(spec, iterations);
    const int cols = static_cast<int>(transfer.cols());

    std::vector<int> photon_columns;
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < input[c]; ++r) photon_columns.push_back(c);
    const int n = static_cast<int>(photon_columns.size());

    // Identical photons in the same column give identical subsets; collapse by
    // the multiset of quantum-group columns.
    std::map<std::vector<int>, double> subset_weights;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        const int k = std::popcount(mask);
        double w = std::pow(p, k) * std::pow(1.0 - p, n - k);
        if (w == 0.0) continue;
        std::vector<int> group;
        for (int i = 0; i < n; ++i)
            if (mask & (std::uint64_t(1) << i)) group.push_back(photon_columns[i]);
        subset_weights[group] += w;
    }

    std::map<FockState, double> acc;
    for (const auto& [group, weight] : subset_weights) {
        FockState group_input(cols, 0);
        std::vector<int> singles = photon_columns;
        for (int c : group) {
            group_input[c] += 1;
            singles.erase(std::find(singles.begin(), singles.end(), c));
        }
        Distribution mixed = quantum_group_distribution(transfer, group_input, cap);
        for (int c : singles) mixed = convolve(mixed, single_photon_distribution(transfer, c));
        for (const auto& [s, prob] : mixed.support) {
            if (prob == 0.0) continue;
            acc[s] += weight * prob;
        }
    }

    DistributionMeta meta{SamplerKind::Quantum, FeedbackKind::Looped, iterations, ""};
    return from_map(std::move(acc), std::move(meta));
}

Distribution phase_average(const InterferometerSpec& spec, int iterations, int draws,
                           std::uint64_t seed, SamplerKind kind, FeedbackKind feedback,
                           std::size_t cap) {
    if (draws < 1) throw ConfigError("phase_average: need at least one draw");
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    Distribution mean;
    std::vector<double> m2;
    for (int k = 0; k < draws; ++k) {
        InterferometerSpec draw = spec;
        draw.random_phases = false;
        draw.feedback_phases.resize(spec.loops);
        for (int i = 0; i < spec.loops; ++i) draw.feedback_phases[i] = angle(gen);
        Distribution d = full_distribution(draw, iterations, kind, feedback, cap);
        if (k == 0) {
            mean = d;
            m2.assign(d.support.size(), 0.0);
        } else {
            // Welford update per outcome; support order is identical per draw.
            for (std::size_t i = 0; i < d.support.size(); ++i) {
                double x = d.support[i].second;
                double delta = x - mean.support[i].second;
                mean.support[i].second += delta / (k + 1);
                m2[i] += delta * (x - mean.support[i].second);
            }
        }
    }
    mean.std_error.resize(mean.support.size(), 0.0);
    if (draws > 1) {
        for (std::size_t i = 0; i < m2.size(); ++i)
            mean.std_error[i] = std::sqrt(m2[i] / (static_cast<double>(draws) * (draws - 1)));
    }
    return mean;
}

SampleSet draw_samples(const Distribution& dist, int n, std::uint64_t seed) {
    const double tot = dist.total();
    if (std::abs(tot - 1.0) > 1e-6)
        throw NumericalError("draw_samples: distribution not normalized (sum " +
                             std::to_string(tot) + ")");
    std::vector<double> cdf(dist.support.size());
    double run = 0.0;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        run += dist.support[i].second;
        cdf[i] = run;
    }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    SampleSet set;
    set.seed = seed;
    set.source_metadata = dist.meta;
    set.samples.reserve(n);
    for (int i = 0; i < n; ++i) {
        double u = unif(gen) * run;
        auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = std::min<std::size_t>(it - cdf.begin(), dist.support.size() - 1);
        set.samples.push_back(dist.support[idx].first);
    }
    return set;
}

Distribution oracle_distribution(const ComplexMatrix& transfer, const FockState& input,
                                 std::size_t amplitude_cap) {
    if (static_cast<int>(input.size()) != transfer.cols())
        throw DimensionError("oracle_distribution: input length != transfer columns");
    const int rows = static_cast<int>(transfer.rows());

    // Coefficients of output-creation-operator monomials; start from the
    // vacuum and multiply in one input photon at a time.
    std::map<FockState, Complex> coeff;
    coeff[FockState(rows, 0)] = Complex(1.0, 0.0);
    for (int c = 0; c < static_cast<int>(input.size()); ++c) {
        for (int rep = 0; rep < input[c]; ++rep) {
            std::map<FockState, Complex> next;
            for (const auto& [state, amp] : coeff) {
                for (int r = 0; r < rows; ++r) {
                    Complex w = transfer(r, c);
                    if (w == Complex(0.0, 0.0)) continue;
                    FockState up = state;
                    up[r] += 1;
                    next[up] += amp * w;
                }
            }
            if (next.size() > amplitude_cap)
                throw ResourceError("oracle_distribution: amplitude count " +
                                    std::to_string(next.size()) + " exceeds cap");
            coeff = std::move(next);
        }
    }

    const double in_norm = occupation_factorial_product(input);
    Distribution d;
    d.meta = {SamplerKind::Quantum, FeedbackKind::Looped, 1, ""};
    d.support.reserve(coeff.size());
    for (const auto& [state, amp] : coeff) {
        double prob = std::norm(amp) * occupation_factorial_product(state) / in_norm;
        d.support.emplace_back(state, prob);
    }
    // map iteration is already sorted ascending
    return d;
}

double total_variation(const Distribution& a, const Distribution& b) {
    double tv = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.support.size() || j < b.support.size()) {
        if (j >= b.support.size() ||
            (i < a.support.size() && a.support[i].first < b.support[j].first)) {
            tv += std::abs(a.support[i].second);
            ++i;
        } else if (i >= a.support.size() || b.support[j].first < a.support[i].first) {
            tv += std::abs(b.support[j].second);
            ++j;
        } else {
            tv += std::abs(a.support[i].second - b.support[j].second);
            ++i;
            ++j;
        }
    }
    return 0.5 * tv;
}

// --- persistence ------------------------------------------------------------

void write_distribution(std::ostream& os, const Distribution& dist,
                        const std::vector<std::string>& extra_headers) {
    os << "# kind=" << to_string(dist.meta.kind) << "\n";
    os << "# feedback=" << to_string(dist.meta.feedback) << "\n";
    os << "# T=" << dist.meta.iterations << "\n";
    os << "# modes=" << dist.mode_count() << "\n";
    if (!dist.std_error.empty()) os << "# stderr=1\n";
    if (!dist.meta.marginalization.empty())
        os << "# marginal=" << dist.meta.marginalization << "\n";
    for (const std::string& h : extra_headers) os << "# " << h << "\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        for (int occ : dist.support[i].first) os << occ << " ";
        os << dist.support[i].second;
        if (!dist.std_error.empty()) os << " " << dist.std_error[i];
        os << "\n";
    }
}

void write_distribution_file(const std::string& path, const Distribution& dist,
                             const std::vector<std::string>& extra_headers) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    write_distribution(os, dist, extra_headers);
}

Distribution read_distribution(std::istream& is) {
    Distribution d;
    bool has_err = false;
    int modes = -1;
    std::string line;
    while (std::getline(is, line)) {
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') {
            std::string body = line.substr(pos + 1);
            std::size_t start = body.find_first_not_of(" ");
            if (start == std::string::npos) continue;
            body = body.substr(start);
            if (body.rfind("kind=", 0) == 0)
                d.meta.kind = sampler_kind_from_string(body.substr(5));
            else if (body.rfind("feedback=", 0) == 0)
                d.meta.feedback = feedback_kind_from_string(body.substr(9));
            else if (body.rfind("T=", 0) == 0)
                d.meta.iterations = std::stoi(body.substr(2));
            else if (body.rfind("modes=", 0) == 0)
                modes = std::stoi(body.substr(6));
            else if (body.rfind("stderr=", 0) == 0)
                has_err = body.substr(7) == "1";
            else if (body.rfind("marginal=", 0) == 0)
                d.meta.marginalization = body.substr(9);
            continue;
        }
        std::istringstream row(line);
        std::vector<std::string> toks;
        std::string tok;
        while (row >> tok) toks.push_back(tok);
        if (toks.size() < 2) throw ConfigError("distribution file: short outcome line");
        std::size_t nocc = modes >= 0 ? static_cast<std::size_t>(modes)
                                      : toks.size() - (has_err ? 2 : 1);
        if (toks.size() != nocc + (has_err ? 2 : 1))
            throw ConfigError("distribution file: outcome line width mismatch");
        FockState s(nocc);
        for (std::size_t i = 0; i < nocc; ++i) s[i] = std::stoi(toks[i]);
        d.support.emplace_back(std::move(s), std::stod(toks[nocc]));
        if (has_err) d.std_error.push_back(std::stod(toks[nocc + 1]));
    }
    d.sort_support();
    return d;
}

Distribution read_distribution_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open distribution file: " + path);
    return read_distribution(is);
}

void write_samples(std::ostream& os, const SampleSet& set,
                   const std::vector<std::string>& extra_headers) {
    os << "# seed=" << set.seed << "\n";
    os << "# kind=" << to_string(set.source_metadata.kind) << "\n";
    os << "# feedback=" << to_string(set.source_metadata.feedback) << "\n";
    os << "# T=" << set.source_metadata.iterations << "\n";
    for (const std::string& h : extra_headers) os << "# " << h << "\n";
    for (const FockState& s : set.samples) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) os << " ";
            os << s[i];
        }
        os << "\n";
    }
}

void write_samples_file(const std::string& path, const SampleSet& set,
                        const std::vector<std::string>& extra_headers) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    write_samples(os, set, extra_headers);
}

SampleSet read_samples(std::istream& is) {
    SampleSet set;
    std::string line;
    while (std::getline(is, line)) {
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#') {
            std::string body = line.substr(pos + 1);
            std::size_t start = body.find_first_not_of(" ");
            if (start == std::string::npos) continue;
            body = body.substr(start);
            if (body.rfind("seed=", 0) == 0)
                set.seed = std::stoull(body.substr(5));
            else if (body.rfind("kind=", 0) == 0)
                set.source_metadata.kind = sampler_kind_from_string(body.substr(5));
            else if (body.rfind("feedback=", 0) == 0)
                set.source_metadata.feedback = feedback_kind_from_string(body.substr(9));
            else if (body.rfind("T=", 0) == 0)
                set.source_metadata.iterations = std::stoi(body.substr(2));
            continue;
        }
        std::istringstream row(line);
        FockState s;
        int v;
        while (row >> v) s.push_back(v);
        set.samples.push_back(std::move(s));
    }
    return set;
}

SampleSet read_samples_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open samples file: " + path);
    return read_samples(is);
}

} // namespace loopsampler
