#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "loopsampler/fock.hpp"
#include "loopsampler/tomography.hpp"

namespace fs = std::filesystem;
using namespace loopsampler;

namespace {

const char* kBin = LOOPSAMPLER_BIN;

int run(const std::string& args) {
    int status = std::system((std::string(kBin) + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::string run_capture(const std::string& args) {
    std::string log = "/tmp/loopsampler_cli_out.txt";
    int status = std::system((std::string(kBin) + " " + args + " >" + log + " 2>&1").c_str());
    (void)status;
    std::ifstream is(log);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::path("/tmp/loopsampler_cli") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_spec(const fs::path& dir, const std::string& body) {
    fs::path p = dir / "device.spec";
    std::ofstream os(p);
    os << body;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

const char* kBeamsplitterSpec = R"(modes = 2
loops = 0
iterations = 1
unitary = random
unitary_seed = 3
feedback_phases =
injection = 1 1
)";

const char* kLoopedSpec = R"(modes = 3
loops = 1
iterations = 2
unitary = random
unitary_seed = 5
feedback_phases = 0.7
injection = 1 0
)";

} // namespace

TEST_CASE("usage errors exit with code 1") {
    CHECK(run("") == 1);
    CHECK(run("bogus-command") == 1);
    CHECK(run("simulate") == 1);                       // --spec required
    CHECK(run("simulate --spec /nonexistent.spec") == 1);
    CHECK(run("tomo") == 1);                           // neither synthetic nor data inputs
}

TEST_CASE("simulate writes normalized distributions") {
    fs::path dir = fresh_dir("simulate");
    fs::path spec = write_spec(dir, kBeamsplitterSpec);
    CHECK(run("simulate --spec " + spec.string() + " --out " + dir.string()) == 0);

    for (const char* name :
         {"dist_quantum_looped.txt", "dist_distinguishable_looped.txt",
          "dist_uniform_looped.txt"}) {
        Distribution d = read_distribution_file((dir / name).string());
        CHECK(std::abs(d.total() - 1.0) <= 1e-9);
    }
    // artifact headers carry provenance
    std::string text = read_file(dir / "dist_quantum_looped.txt");
    CHECK(text.find("tool=loopsampler") != std::string::npos);
    CHECK(text.find("seed=1") != std::string::npos);
    CHECK(text.find("spec_hash=0x") != std::string::npos);
}

TEST_CASE("simulate emits looped, unlooped and per-iteration marginal files") {
    fs::path dir = fresh_dir("simulate_looped");
    fs::path spec = write_spec(dir, kLoopedSpec);
    CHECK(run("simulate --spec " + spec.string() + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "dist_quantum_unlooped.txt"));
    CHECK(fs::exists(dir / "marginal_iter1_quantum.txt"));
    CHECK(fs::exists(dir / "marginal_iter2_quantum.txt"));
    Distribution m1 = read_distribution_file((dir / "marginal_iter1_quantum.txt").string());
    CHECK(std::abs(m1.total() - 1.0) <= 1e-9);
    CHECK(m1.mode_count() == 2);
}

TEST_CASE("random feedback phases add a phase-averaged artifact") {
    fs::path dir = fresh_dir("simulate_random");
    fs::path spec = write_spec(dir, kLoopedSpec);
    CHECK(run("simulate --spec " + spec.string() + " --out " + dir.string() +
              " --set feedback_phases=random --phase-samples 8") == 0);
    CHECK(fs::exists(dir / "dist_quantum_looped_phase_averaged.txt"));
}

TEST_CASE("identical seed and spec give byte-identical outputs") {
    fs::path dir_a = fresh_dir("det_a");
    fs::path dir_b = fresh_dir("det_b");
    fs::path spec_a = write_spec(dir_a, kLoopedSpec);
    fs::path spec_b = write_spec(dir_b, kLoopedSpec);
    // identical relative command lines so provenance headers match too
    auto invoke = [&](const fs::path& dir) {
        std::string cmd = "cd " + dir.string() + " && " + kBin +
                          " simulate --spec device.spec --seed 9 --out out >/dev/null 2>&1";
        return WEXITSTATUS(std::system(cmd.c_str()));
    };
    REQUIRE(invoke(dir_a) == 0);
    REQUIRE(invoke(dir_b) == 0);
    for (const char* name : {"dist_quantum_looped.txt", "dist_quantum_unlooped.txt"})
        CHECK(read_file(dir_a / "out" / name) == read_file(dir_b / "out" / name));
}

TEST_CASE("info prints the size summary for a large device and simulate refuses it") {
    fs::path dir = fresh_dir("info");
    fs::path spec = write_spec(dir, R"(modes = 25
loops = 5
iterations = 4
unitary = random
feedback_phases = 0 0 0 0 0
injection = 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 ; 1 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 ; 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 ; 1 1 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
)");
    std::string text = run_capture("info --spec " + spec.string());
    CHECK(text.find("10 photons / 85 modes / ≈43.0 qubits") != std::string::npos);
    CHECK(run("info --spec " + spec.string()) == 0);
    // the same device exceeds the enumeration cap for a full simulation
    CHECK(run("simulate --spec " + spec.string() + " --out " + dir.string()) == 2);
}

TEST_CASE("sample draws from a spec or an existing distribution file") {
    fs::path dir = fresh_dir("sample");
    fs::path spec = write_spec(dir, kBeamsplitterSpec);
    CHECK(run("sample --spec " + spec.string() + " --out " + dir.string() +
              " --count 25 --seed 4") == 0);
    SampleSet set = read_samples_file((dir / "samples.txt").string());
    CHECK(set.samples.size() == 25);
    for (const FockState& s : set.samples) CHECK(s.size() == 2);

    REQUIRE(run("simulate --spec " + spec.string() + " --out " + dir.string()) == 0);
    fs::path dir2 = fresh_dir("sample_from_file");
    CHECK(run("sample --dist " + (dir / "dist_quantum_looped.txt").string() + " --out " +
              dir2.string() + " --count 10") == 0);
    CHECK(read_samples_file((dir2 / "samples.txt").string()).samples.size() == 10);

    CHECK(run("sample --count 5") == 1); // neither spec nor file
}

TEST_CASE("validate writes one trajectory per standard pair") {
    fs::path dir = fresh_dir("validate");
    fs::path spec = write_spec(dir, kLoopedSpec);
    std::string text = run_capture("validate --spec " + spec.string() + " --out " + dir.string() +
                                   " --sets 12 --samples 60 --phase-samples 8 --seed 2");
    CHECK(fs::exists(dir / "trajectory_quantum_vs_distinguishable.txt"));
    CHECK(fs::exists(dir / "trajectory_quantum_vs_uniform.txt"));
    CHECK(fs::exists(dir / "trajectory_looped_vs_unlooped.txt"));
    CHECK(fs::exists(dir / "trajectory_looped-phase-avg_vs_unlooped.txt"));
    CHECK(text.find("crosses 0.99 at step") != std::string::npos);
}

TEST_CASE("validate flags degenerate pairs and emits a flat trajectory") {
    fs::path dir = fresh_dir("validate_flat");
    fs::path spec = write_spec(dir, R"(modes = 3
loops = 1
iterations = 1
unitary = random
unitary_seed = 5
feedback_phases = 0.7
injection = 1 0
)");
    std::string text = run_capture("validate --spec " + spec.string() + " --out " + dir.string() +
                                   " --sets 6 --samples 20 --phase-samples 4");
    CHECK(text.find("warning") != std::string::npos);
    CHECK(text.find("identical") != std::string::npos);
    std::string traj = read_file(dir / "trajectory_looped_vs_unlooped.txt");
    CHECK(traj.find("0.5") != std::string::npos);
}

TEST_CASE("tomo synthetic mode reconstructs a small unitary") {
    fs::path dir = fresh_dir("tomo");
    std::string text = run_capture("tomo --dim 3 --seed 6 --restarts 4 --max-iter 1500 --out " +
                                   dir.string());
    CHECK(fs::exists(dir / "reconstruction.txt"));
    CHECK(text.find("complex fidelity vs truth:") != std::string::npos);
    CHECK(run("tomo --dim 3 --seed 6 --restarts 4 --max-iter 1500 --out " + dir.string()) == 0);
}

TEST_CASE("tomo data mode consumes measurement files") {
    fs::path dir = fresh_dir("tomo_data");
    ComplexMatrix u = random_unitary(3, 91);
    ComplexMatrix moduli(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) moduli(r, c) = std::norm(u(r, c));
    write_matrix_file((dir / "moduli.mat").string(), moduli);

    std::ofstream vis(dir / "vis.csv");
    vis << "# i,j,k,l,V\n";
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = k + 1; l < 3; ++l)
                    vis << i << "," << j << "," << k << "," << l << ","
                        << hom_visibility(u, i, j, k, l) << "\n";
    vis.close();

    CHECK(run("tomo --moduli " + (dir / "moduli.mat").string() + " --visibilities " +
              (dir / "vis.csv").string() + " --restarts 4 --max-iter 1500 --out " +
              dir.string()) == 0);
    CHECK(fs::exists(dir / "reconstruction.txt"));
}
