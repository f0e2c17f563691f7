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

#include <CLI11.hpp>

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "loopsampler/fock.hpp"
#include "loopsampler/parallel.hpp"
#include "loopsampler/spec_config.hpp"
#include "loopsampler/tomography.hpp"
#include "loopsampler/validation.hpp"

namespace fs = std::filesystem;
using namespace loopsampler;

#ifndef LOOPSAMPLER_VERSION
#define LOOPSAMPLER_VERSION "0.0.0"
#endif

namespace {

struct CommonOptions {
    std::string spec_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 0;
    int phase_samples = 64;
    std::size_t cap = kDefaultOutcomeCap;
    std::vector<std::string> sets;
};

std::vector<std::pair<std::string, std::string>> parse_overrides(
    const std::vector<std::string>& sets) {
    std::vector<std::pair<std::string, std::string>> overrides;
    for (const std::string& s : sets) {
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    return overrides;
}

/// Provenance headers embedded in every output artifact.
std::vector<std::string> artifact_headers(const CommonOptions& opt, int argc, char** argv) {
    std::ostringstream cmd;
    for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
    std::vector<std::string> headers = {
        std::string("tool=loopsampler ") + LOOPSAMPLER_VERSION,
        "command: " + cmd.str(),
        "seed=" + std::to_string(opt.seed),
    };
    if (!opt.spec_path.empty()) {
        std::ostringstream h;
        h << "spec_hash=0x" << std::hex << file_hash(opt.spec_path);
        headers.push_back(h.str());
    }
    return headers;
}

InterferometerSpec load_spec(const CommonOptions& opt) {
    if (opt.spec_path.empty()) throw ConfigError("--spec is required for this command");
    return load_spec_file(opt.spec_path, parse_overrides(opt.sets));
}

/// Random-phase specs get a concrete draw for deterministic outputs.
void resolve_phases(InterferometerSpec& spec, std::uint64_t seed) {
    if (!spec.random_phases) return;
    if (spec.feedback_phases.empty()) {
        std::mt19937_64 gen(seed ^ 0xf00dcafe12345678ull);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        spec.feedback_phases.resize(spec.loops);
        for (double& p : spec.feedback_phases) p = angle(gen);
    }
    spec.random_phases = false;
}

int total_injected(const InterferometerSpec& spec) {
    int n = 0;
    for (const FockState& s : spec.injection)
        for (int v : s) n += v;
    return n;
}

void print_size_summary(const InterferometerSpec& spec, std::size_t cap) {
    int photons = total_injected(spec);
    EffectiveSize size = effective_size_total(photons, spec.modes, spec.loops, spec.iterations);
    long long outcomes = fock_state_count(size.modes, size.photons);
    std::cout << "device: M=" << spec.modes << " L=" << spec.loops << " T=" << spec.iterations
              << "\n"
              << "size summary: " << size.photons << " photons / " << size.modes
              << " modes / ≈" << std::fixed << std::setprecision(1)
              << size.qubit_equivalent << " qubits\n"
              << std::defaultfloat << "outcome count: " << outcomes << " (cap " << cap << ")\n";
}

void guard_cap(const InterferometerSpec& spec, std::size_t cap) {
    EffectiveSize size =
        effective_size_total(total_injected(spec), spec.modes, spec.loops, spec.iterations);
    long long outcomes = fock_state_count(size.modes, size.photons);
    if (outcomes > static_cast<long long>(cap))
        throw ResourceError("outcome count " + std::to_string(outcomes) +
                            " exceeds enumeration cap " + std::to_string(cap));
}

int run_simulate(const CommonOptions& opt, int argc, char** argv) {
    InterferometerSpec spec = load_spec(opt);
    print_size_summary(spec, opt.cap);
    guard_cap(spec, opt.cap);
    bool phase_averaged = spec.random_phases;
    resolve_phases(spec, opt.seed);

    fs::create_directories(opt.out_dir);
    auto headers = artifact_headers(opt, argc, argv);
    auto path = [&](const std::string& name) { return (fs::path(opt.out_dir) / name).string(); };
    const int t = spec.iterations;

    Distribution quantum = full_distribution(spec, t, SamplerKind::Quantum,
                                             FeedbackKind::Looped, opt.cap);
    write_distribution_file(path("dist_quantum_looped.txt"), quantum, headers);
    write_distribution_file(
        path("dist_distinguishable_looped.txt"),
        full_distribution(spec, t, SamplerKind::Distinguishable, FeedbackKind::Looped, opt.cap),
        headers);
    write_distribution_file(
        path("dist_uniform_looped.txt"),
        full_distribution(spec, t, SamplerKind::Uniform, FeedbackKind::Looped, opt.cap), headers);
    write_distribution_file(
        path("dist_quantum_unlooped.txt"),
        full_distribution(spec, t, SamplerKind::Quantum, FeedbackKind::Unlooped, opt.cap),
        headers);

    for (int it = 0; it < t; ++it)
        write_distribution_file(path("marginal_iter" + std::to_string(it + 1) + "_quantum.txt"),
                                iteration_marginal(quantum, spec, it), headers);

    if (phase_averaged)
        write_distribution_file(path("dist_quantum_looped_phase_averaged.txt"),
                                phase_average(spec, t, opt.phase_samples, opt.seed,
                                              SamplerKind::Quantum, FeedbackKind::Looped, opt.cap),
                                headers);
    if (!spec.loss.is_lossless())
        write_distribution_file(path("dist_quantum_looped_lossy.txt"),
                                apply_loss(quantum, spec.loss, spec, t, opt.cap), headers);
    if (spec.source.indistinguishability < 1.0)
        write_distribution_file(
            path("dist_mixed_looped.txt"),
            mix_distinguishability(spec, t, spec.source.indistinguishability, opt.cap), headers);

    std::cout << "wrote distributions to " << opt.out_dir << "\n";
    return 0;
}

int run_sample(const CommonOptions& opt, int argc, char** argv, const std::string& dist_file,
               const std::string& kind_name, int count) {
    Distribution dist;
    if (!dist_file.empty()) {
        dist = read_distribution_file(dist_file);
    } else {
        InterferometerSpec spec = load_spec(opt);
        guard_cap(spec, opt.cap);
        resolve_phases(spec, opt.seed);
        dist = full_distribution(spec, spec.iterations, sampler_kind_from_string(kind_name),
                                 FeedbackKind::Looped, opt.cap);
    }
    SampleSet set = draw_samples(dist, count, opt.seed);
    fs::create_directories(opt.out_dir);
    std::string out = (fs::path(opt.out_dir) / "samples.txt").string();
    write_samples_file(out, set, artifact_headers(opt, argc, argv));
    std::cout << "wrote " << count << " samples to " << out << "\n";
    return 0;
}

int run_validate(const CommonOptions& opt, int argc, char** argv, int n_sets, int set_size,
                 double level) {
    InterferometerSpec spec = load_spec(opt);
    guard_cap(spec, opt.cap);
    resolve_phases(spec, opt.seed);
    fs::create_directories(opt.out_dir);
    auto headers = artifact_headers(opt, argc, argv);

    auto pairs = standard_validators(spec, spec.iterations, opt.phase_samples, opt.seed, opt.cap);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const HypothesisPair& pair = pairs[k];
        if (pair.degenerate)
            std::cout << "warning: " << pair.label_a << " vs " << pair.label_b
                      << " are identical distributions; trajectory stays at 0.5\n";
        ValidationTrajectory bands = confidence_bands(pair, pair.dist_a, n_sets, set_size, level,
                                                      opt.seed + k, 0.99);
        std::string name = "trajectory_" + pair.label_a + "_vs_" + pair.label_b + ".txt";
        auto h = headers;
        h.push_back("pair: " + pair.label_a + " vs " + pair.label_b);
        write_trajectory_file((fs::path(opt.out_dir) / name).string(), bands, h);
        int cross = median_crossing_step(bands);
        std::cout << pair.label_a << " vs " << pair.label_b << ": median P(" << pair.label_a
                  << ") crosses 0.99 at step "
                  << (cross < 0 ? std::string("never") : std::to_string(cross)) << "\n";
    }
    return 0;
}

int run_tomo(const CommonOptions& opt, int argc, char** argv, int dim,
             const std::string& truth_file, double noise, int pairs, int restarts, int max_iter,
             bool fit_losses, double lambda, const std::string& moduli_file,
             const std::string& vis_file) {
    TomographyData data;
    ComplexMatrix truth;
    bool have_truth = false;

    if (!truth_file.empty() || dim > 0) {
        truth = truth_file.empty() ? random_unitary(dim, opt.seed) : read_matrix_file(truth_file);
        have_truth = true;
        int m = static_cast<int>(truth.rows());
        if (pairs <= 0) pairs = m * (m - 1) / 2;
        data = synthesize_measurements(truth, {}, {}, pairs, noise, opt.seed + 1);
    } else if (!moduli_file.empty() && !vis_file.empty()) {
        data.moduli = read_matrix_file(moduli_file).real();
        data.visibilities = read_visibilities_file(vis_file);
        data.noise_level = noise;
    } else {
        std::cerr << "tomo: give either --dim/--truth-file (synthetic) or --moduli and "
                     "--visibilities (data mode)\n";
        return 1;
    }

    ReconstructConfig config;
    config.restarts = restarts;
    config.max_iterations = max_iter;
    config.fit_losses = fit_losses;
    config.lambda = lambda;
    config.seed = opt.seed;
    ReconstructionResult result = reconstruct(data, config);
    if (!result.converged)
        std::cout << "warning: optimizer did not reach the convergence tolerance\n";

    fs::create_directories(opt.out_dir);
    auto headers = artifact_headers(opt, argc, argv);
    std::cout << std::setprecision(6) << "objective: " << result.objective
              << "\ntraining visibility MAE: " << result.visibility_mae
              << "\nmoduli fidelity vs data: " << result.moduli_fidelity << "\n";

    if (have_truth) {
        int m = static_cast<int>(truth.rows());
        TomographyData holdout =
            synthesize_measurements(truth, {}, {}, m * (m - 1) / 2, noise, opt.seed + 2);
        EvaluationMetrics metrics =
            evaluate_reconstruction(result, truth, holdout.visibilities);
        headers.push_back("evaluation: against synthetic ground truth");
        std::cout << "moduli fidelity vs truth: " << metrics.moduli_fidelity
                  << "\ncomplex fidelity vs truth: " << metrics.complex_fidelity
                  << "\nheld-out visibility MAE: " << metrics.visibility_mae << "\n";
    }
    write_reconstruction_file((fs::path(opt.out_dir) / "reconstruction.txt").string(), result,
                              headers);
    return 0;
}

int run_info(const CommonOptions& opt) {
    InterferometerSpec spec = load_spec(opt);
    print_size_summary(spec, opt.cap);
    IsometryCheck check = check_isometry(spec.unitary, 1e-10);
    std::cout << "unitary deviation from isometry: " << check.deviation << "\n"
              << "feedback phases: "
              << (spec.random_phases ? std::string("random")
                                     : std::to_string(spec.feedback_phases.size()) + " fixed")
              << "\n"
              << "spec hash: 0x" << std::hex << file_hash(opt.spec_path) << std::dec << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loopback boson sampling simulator and validation toolkit"};
    app.set_version_flag("--version", LOOPSAMPLER_VERSION);
    app.require_subcommand(1);

    CommonOptions opt;
    auto add_common = [&](CLI::App* sub, bool needs_spec) {
        auto* spec_opt = sub->add_option("--spec", opt.spec_path, "device spec file");
        if (needs_spec) spec_opt->required();
        sub->add_option("--seed", opt.seed, "random seed recorded in artifacts");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--threads", opt.threads, "worker thread cap (0 = hardware)");
        sub->add_option("--phase-samples", opt.phase_samples, "phase-average draw count");
        sub->add_option("--cap", opt.cap, "outcome enumeration cap");
        sub->add_option("--set", opt.sets, "spec override KEY=VALUE")->take_all();
    };

    CLI::App* simulate = app.add_subcommand("simulate", "write exact output distributions");
    add_common(simulate, true);

    CLI::App* sample = app.add_subcommand("sample", "draw samples from a distribution");
    add_common(sample, false);
    std::string dist_file, kind_name = "quantum";
    int count = 100;
    sample->add_option("--dist", dist_file, "sample from an existing distribution file");
    sample->add_option("--kind", kind_name, "quantum|distinguishable|uniform");
    sample->add_option("--count", count, "number of samples");

    CLI::App* validate = app.add_subcommand("validate", "run the Bayesian validator suite");
    add_common(validate, true);
    int n_sets = 100, set_size = 200;
    double level = 0.9;
    validate->add_option("--sets", n_sets, "independent sample sets for the bands");
    validate->add_option("--samples", set_size, "samples per set");
    validate->add_option("--level", level, "empirical band level");

    CLI::App* tomo = app.add_subcommand("tomo", "reconstruct a unitary from measurements");
    add_common(tomo, false);
    int dim = 0, pairs = 0, restarts = 8, max_iter = 3000;
    double noise = 0.0, lambda = 1.0;
    bool fit_losses = false;
    std::string truth_file, moduli_file, vis_file;
    tomo->add_option("--dim", dim, "synthetic mode: random truth of this size");
    tomo->add_option("--truth-file", truth_file, "synthetic mode: truth matrix file");
    tomo->add_option("--noise", noise, "synthetic measurement noise sigma");
    tomo->add_option("--pairs", pairs, "input pair budget (0 = all)");
    tomo->add_option("--restarts", restarts, "optimizer restarts");
    tomo->add_option("--max-iter", max_iter, "optimizer iterations per restart");
    tomo->add_flag("--fit-losses", fit_losses, "fit per-mode loss factors");
    tomo->add_option("--lambda", lambda, "visibility residual weight");
    tomo->add_option("--moduli", moduli_file, "data mode: measured intensity matrix");
    tomo->add_option("--visibilities", vis_file, "data mode: visibility records");

    CLI::App* info = app.add_subcommand("info", "print device size and sanity checks");
    add_common(info, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (opt.threads > 0) set_thread_cap(opt.threads);
        if (simulate->parsed()) return run_simulate(opt, argc, argv);
        if (sample->parsed()) return run_sample(opt, argc, argv, dist_file, kind_name, count);
        if (validate->parsed()) return run_validate(opt, argc, argv, n_sets, set_size, level);
        if (tomo->parsed())
            return run_tomo(opt, argc, argv, dim, truth_file, noise, pairs, restarts, max_iter,
                            fit_losses, lambda, moduli_file, vis_file);
        if (info->parsed()) return run_info(opt);
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
