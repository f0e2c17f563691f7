#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "loopsampler/fock.hpp"
#include "test_util.hpp"

using namespace loopsampler;
using loopsampler::test::make_spec;

namespace {

ComplexMatrix balanced_beamsplitter() {
    ComplexMatrix bs(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    bs << Complex(s, 0), Complex(s, 0), Complex(s, 0), Complex(-s, 0);
    return bs;
}

} // namespace

TEST_CASE("enumerate_fock_states") {
    auto two_one = enumerate_fock_states(2, 1);
    REQUIRE(two_one.size() == 2);
    CHECK(two_one[0] == FockState{1, 0});
    CHECK(two_one[1] == FockState{0, 1});

    CHECK(enumerate_fock_states(3, 2).size() == 6);
    CHECK(fock_state_count(85, 10) == 9041256841903ll); // C(94, 10)
}

TEST_CASE("fock_state_count matches the 43-qubit estimate") {
    // C(94, 10)
    long long c = fock_state_count(85, 10);
    CHECK(std::abs(std::log2(static_cast<double>(c)) - 43.0) < 0.1);
}

TEST_CASE("event_probability canonical cases") {
    ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    CHECK(event_probability(id, {1, 0}, {1, 0}, SamplerKind::Quantum) == doctest::Approx(1.0));
    CHECK(event_probability(id, {1, 0}, {0, 1}, SamplerKind::Quantum) == doctest::Approx(0.0));

    ComplexMatrix bs = balanced_beamsplitter();
    CHECK(event_probability(bs, {1, 1}, {1, 1}, SamplerKind::Quantum) ==
          doctest::Approx(0.0)); // HOM dip
    CHECK(event_probability(bs, {1, 1}, {2, 0}, SamplerKind::Quantum) == doctest::Approx(0.5));
    CHECK(event_probability(bs, {1, 1}, {1, 1}, SamplerKind::Distinguishable) ==
          doctest::Approx(0.5));

    CHECK_THROWS_AS(event_probability(bs, {1, 1}, {1, 0}, SamplerKind::Quantum), NumericalError);
}

TEST_CASE("full_distribution with no loops at T=1 reduces to the plain sampler") {
    InterferometerSpec spec = make_spec(3, 0, 1, 41, 2);
    Distribution d = full_distribution(spec, 1, SamplerKind::Quantum);
    for (const auto& [state, p] : d.support)
        CHECK(p == doctest::Approx(event_probability(spec.unitary, spec.injection[0], state,
                                                     SamplerKind::Quantum))
                       .epsilon(1e-12));
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quantum, distinguishable and uniform distributions normalize") {
    InterferometerSpec spec = make_spec(4, 1, 2, 43);
    for (SamplerKind kind :
         {SamplerKind::Quantum, SamplerKind::Distinguishable, SamplerKind::Uniform}) {
        Distribution d = full_distribution(spec, 2, kind);
        CHECK(std::abs(d.total() - 1.0) <= 1e-9);
        // photon-number conservation on the lossless space
        for (const auto& [state, p] : d.support) CHECK(total_photons(state) == 2);
    }
}

TEST_CASE("full_distribution agrees with the dense Fock oracle") {
    std::mt19937_64 gen(47);
    for (int trial = 0; trial < 6; ++trial) {
        int m = 2 + static_cast<int>(gen() % 3);
        int l = (m > 2) ? static_cast<int>(gen() % 2) : 0;
        int t = 1 + static_cast<int>(gen() % 2);
        int n = 1 + static_cast<int>(gen() % 2);
        InterferometerSpec spec = make_spec(m, l, t, 900 + trial, n);
        Distribution perm_based = full_distribution(spec, t, SamplerKind::Quantum);

        BlockPartition b = apply_feedback_phases(partition_unitary(spec), spec.feedback_phases);
        ComplexMatrix transfer = build_extended_matrix(b, t);
        FockState input;
        for (int it = 0; it < t; ++it)
            input.insert(input.end(), spec.injection[it].begin(), spec.injection[it].end());
        Distribution oracle = oracle_distribution(transfer, input);
        CHECK(total_variation(perm_based, oracle) <= 1e-9);
    }
}

TEST_CASE("oracle_distribution canonical cases") {
    ComplexMatrix id = ComplexMatrix::Identity(3, 3);
    Distribution point = oracle_distribution(id, {0, 2, 1});
    CHECK(point.probability_of({0, 2, 1}) == doctest::Approx(1.0));

    Distribution hom = oracle_distribution(balanced_beamsplitter(), {1, 1});
    CHECK(hom.probability_of({2, 0}) == doctest::Approx(0.5));
    CHECK(hom.probability_of({0, 2}) == doctest::Approx(0.5));
    CHECK(hom.probability_of({1, 1}) == doctest::Approx(0.0));
}

TEST_CASE("marginalize") {
    InterferometerSpec spec = make_spec(4, 1, 2, 53);
    Distribution d = full_distribution(spec, 2, SamplerKind::Quantum);

    SUBCASE("keeping every mode is the identity") {
        std::vector<int> all(d.mode_count());
        std::iota(all.begin(), all.end(), 0);
        Distribution same = marginalize(d, all);
        CHECK(total_variation(same, d) <= 1e-15);
    }

    SUBCASE("two-mode example") {
        Distribution u;
        u.support = {{{1, 0}, 0.5}, {{0, 1}, 0.5}};
        Distribution kept = marginalize(u, {0});
        CHECK(kept.probability_of({1}) == doctest::Approx(0.5));
        CHECK(kept.probability_of({0}) == doctest::Approx(0.5));
    }

    SUBCASE("marginals stay normalized") {
        Distribution ext = external_marginal(d, 6);
        CHECK(std::abs(ext.total() - 1.0) <= 1e-9);
    }

    SUBCASE("empty keep set rejected") {
        CHECK_THROWS_AS(marginalize(d, {}), ConfigError);
    }
}

TEST_CASE("first-iteration marginal ignores the loop and later injections") {
    InterferometerSpec spec = make_spec(4, 1, 2, 59);
    Distribution looped = full_distribution(spec, 2, SamplerKind::Quantum);
    Distribution unlooped =
        full_distribution(spec, 2, SamplerKind::Quantum, FeedbackKind::Unlooped);
    CHECK(total_variation(iteration_marginal(looped, spec, 0),
                          iteration_marginal(unlooped, spec, 0)) <= 1e-10);

    // causality: changing iteration-2 injection leaves iteration 1 untouched
    InterferometerSpec other = spec;
    other.injection[1] = FockState(spec.external_modes(), 0);
    other.injection[1][spec.external_modes() - 1] = 1;
    Distribution moved = full_distribution(other, 2, SamplerKind::Quantum);
    CHECK(total_variation(iteration_marginal(looped, spec, 0),
                          iteration_marginal(moved, spec, 0)) <= 1e-10);
}

TEST_CASE("looped and unlooped distributions coincide at T=1 and differ at T=2") {
    InterferometerSpec spec = make_spec(4, 1, 2, 61);
    const int e = spec.external_modes();
    Distribution l1 = external_marginal(full_distribution(spec, 1, SamplerKind::Quantum), e);
    Distribution u1 = external_marginal(
        full_distribution(spec, 1, SamplerKind::Quantum, FeedbackKind::Unlooped), e);
    CHECK(total_variation(l1, u1) <= 1e-12);

    Distribution l2 = external_marginal(full_distribution(spec, 2, SamplerKind::Quantum), 2 * e);
    Distribution u2 = external_marginal(
        full_distribution(spec, 2, SamplerKind::Quantum, FeedbackKind::Unlooped), 2 * e);
    CHECK(total_variation(l2, u2) > 1e-3);
}

TEST_CASE("apply_loss") {
    InterferometerSpec spec = make_spec(3, 1, 2, 67);

    SUBCASE("lossless is the identity") {
        Distribution d = full_distribution(spec, 2, SamplerKind::Quantum);
        Distribution same = apply_loss(d, LossModel{}, spec, 2);
        CHECK(total_variation(same, d) == 0.0);
    }

    SUBCASE("input Bernoulli loss on a single photon") {
        InterferometerSpec one = make_spec(2, 0, 1, 71, 0);
        one.injection[0] = {1, 0};
        LossModel loss;
        loss.input_efficiency = {0.5, 1.0};
        Distribution d = full_distribution(one, 1, SamplerKind::Quantum);
        Distribution lossy = apply_loss(d, loss, one, 1);
        CHECK(lossy.probability_of({0, 0}) == doctest::Approx(0.5));
        CHECK(std::abs(lossy.total() - 1.0) <= 1e-9);
    }

    SUBCASE("matches the explicit ancilla-mode loss oracle") {
        LossModel loss;
        loss.input_efficiency = {0.8, 0.6};
        loss.output_efficiency = {0.9, 0.75, 0.85};
        loss.detector_efficiency = 0.7;
        InterferometerSpec lossy_spec = spec;
        lossy_spec.loss = loss;
        Distribution pre = full_distribution(spec, 2, SamplerKind::Quantum);
        Distribution lossy = apply_loss(pre, loss, spec, 2);

        // Oracle: append a beamsplitter-to-ancilla stage for every loss channel.
        BlockPartition b = apply_feedback_phases(partition_unitary(spec), spec.feedback_phases);
        ComplexMatrix w = build_extended_matrix(b, 2); // 5 x 4
        const int rows = 5, cols = 4;
        const double eta_in[4] = {0.8, 0.6, 0.8, 0.6};
        double detect[rows];
        for (int r = 0; r < rows; ++r) {
            int phys = r < 4 ? r % 2 : 2;
            detect[r] = loss.output_efficiency[phys] * loss.detector_efficiency;
        }
        ComplexMatrix big = ComplexMatrix::Zero(2 * rows + cols, cols);
        for (int c = 0; c < cols; ++c) {
            for (int r = 0; r < rows; ++r) {
                Complex amp = std::sqrt(eta_in[c]) * w(r, c);
                big(r, c) = std::sqrt(detect[r]) * amp;
                big(rows + r, c) = std::sqrt(1.0 - detect[r]) * amp;
            }
            big(2 * rows + c, c) = std::sqrt(1.0 - eta_in[c]);
        }
        REQUIRE(check_isometry(big, 1e-12).passed);
        FockState input;
        for (int t = 0; t < 2; ++t)
            input.insert(input.end(), spec.injection[t].begin(), spec.injection[t].end());
        Distribution oracle = oracle_distribution(big, input);
        std::vector<int> keep(rows);
        std::iota(keep.begin(), keep.end(), 0);
        Distribution oracle_detected = marginalize(oracle, keep);
        CHECK(total_variation(lossy, oracle_detected) <= 1e-9);
    }
}

TEST_CASE("expected detected photon number under loss") {
    InterferometerSpec spec = make_spec(3, 1, 2, 73);
    LossModel loss;
    loss.input_efficiency = {0.9, 0.7};
    loss.output_efficiency = {0.8, 0.8, 0.8};
    loss.detector_efficiency = 0.9;
    Distribution pre = full_distribution(spec, 2, SamplerKind::Quantum);
    Distribution lossy = apply_loss(pre, loss, spec, 2);
    double mean = 0.0;
    for (const auto& [s, p] : lossy.support) mean += p * total_photons(s);
    // uniform output efficiency: E[n] = sum_i eta_in(i) * 0.8 * 0.9
    double expect = 0.0;
    for (int t = 0; t < 2; ++t)
        for (int j = 0; j < 2; ++j)
            expect += spec.injection[t][j] * loss.input_efficiency[j] * 0.8 * 0.9;
    CHECK(mean == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("mix_distinguishability endpoints and HOM closed form") {
    InterferometerSpec spec = make_spec(3, 1, 2, 79);
    CHECK(total_variation(mix_distinguishability(spec, 2, 1.0),
                          full_distribution(spec, 2, SamplerKind::Quantum)) <= 1e-10);
    CHECK(total_variation(mix_distinguishability(spec, 2, 0.0),
                          full_distribution(spec, 2, SamplerKind::Distinguishable)) <= 1e-10);

    // HOM pair on a balanced beamsplitter: subset enumeration gives
    // P(1,1) = p^2 * 0 + (1 - p^2) * 1/2.
    InterferometerSpec bs;
    bs.modes = 2;
    bs.loops = 0;
    bs.iterations = 1;
    bs.unitary = balanced_beamsplitter();
    bs.injection = {{1, 1}};
    const double p = 0.918;
    Distribution mixed = mix_distinguishability(bs, 1, p);
    CHECK(mixed.probability_of({1, 1}) == doctest::Approx((1.0 - p * p) / 2.0).epsilon(1e-12));
    // pairwise interference visibility of the mixture: 1 - Q/C = p^2
    double vis = 1.0 - mixed.probability_of({1, 1}) / 0.5;
    CHECK(vis == doctest::Approx(p * p).epsilon(1e-12));
}

TEST_CASE("phase_average") {
    SUBCASE("no loops: any K equals the deterministic distribution") {
        InterferometerSpec spec = make_spec(3, 0, 2, 83);
        Distribution avg = phase_average(spec, 2, 5, 1, SamplerKind::Quantum);
        Distribution det = full_distribution(spec, 2, SamplerKind::Quantum);
        CHECK(total_variation(avg, det) <= 1e-12);
    }

    SUBCASE("T=1 is phase independent") {
        InterferometerSpec spec = make_spec(4, 1, 1, 89);
        Distribution avg = phase_average(spec, 1, 7, 2, SamplerKind::Quantum);
        Distribution det = full_distribution(spec, 1, SamplerKind::Quantum);
        CHECK(total_variation(avg, det) <= 1e-12);
        for (double se : avg.std_error) CHECK(se <= 1e-12);
    }

    SUBCASE("standard error shrinks as K^{-1/2}") {
        InterferometerSpec spec = make_spec(3, 1, 2, 97);
        Distribution a = phase_average(spec, 2, 40, 3, SamplerKind::Quantum);
        Distribution b = phase_average(spec, 2, 640, 3, SamplerKind::Quantum);
        double sa = 0.0, sb = 0.0;
        for (double v : a.std_error) sa += v;
        for (double v : b.std_error) sb += v;
        REQUIRE(sb > 0.0);
        CHECK(sa / sb == doctest::Approx(4.0).epsilon(0.5)); // sqrt(640/40) = 4
    }
}

TEST_CASE("draw_samples") {
    Distribution point;
    point.support = {{{2, 0}, 1.0}};
    SampleSet all_same = draw_samples(point, 20, 5);
    for (const FockState& s : all_same.samples) CHECK(s == FockState{2, 0});

    Distribution coin;
    coin.support = {{{1, 0}, 0.5}, {{0, 1}, 0.5}};
    SampleSet set = draw_samples(coin, 100000, 11);
    int heads = 0;
    for (const FockState& s : set.samples) heads += s[0];
    // 3 sigma ~ 474 for n = 1e5
    CHECK(std::abs(heads - 50000) < 3 * 159);

    SampleSet again = draw_samples(coin, 100, 11);
    SampleSet again2 = draw_samples(coin, 100, 11);
    CHECK(again.samples == again2.samples);

    Distribution bogus;
    bogus.support = {{{1}, 0.5}};
    CHECK_THROWS_AS(draw_samples(bogus, 1, 0), NumericalError);
}

TEST_CASE("empirical distance to the generating distribution shrinks") {
    InterferometerSpec spec = make_spec(3, 1, 2, 101);
    Distribution d = full_distribution(spec, 2, SamplerKind::Quantum);
    auto empirical_tv = [&](int n) {
        SampleSet set = draw_samples(d, n, 13);
        std::map<FockState, double> freq;
        for (const FockState& s : set.samples) freq[s] += 1.0 / n;
        Distribution emp;
        emp.support.assign(freq.begin(), freq.end());
        return total_variation(emp, d);
    };
    CHECK(empirical_tv(40000) < empirical_tv(400));
}

TEST_CASE("distribution file round-trips bit-exactly") {
    InterferometerSpec spec = make_spec(3, 1, 2, 103);
    Distribution d = phase_average(spec, 2, 3, 1, SamplerKind::Quantum);
    d.meta.marginalization = "kept 0 1";
    std::stringstream ss;
    write_distribution(ss, d, {"seed=42"});
    Distribution back = read_distribution(ss);
    REQUIRE(back.support.size() == d.support.size());
    for (std::size_t i = 0; i < d.support.size(); ++i) {
        CHECK(back.support[i].first == d.support[i].first);
        CHECK(back.support[i].second == d.support[i].second); // bit-exact
    }
    REQUIRE(back.std_error.size() == d.std_error.size());
    for (std::size_t i = 0; i < d.std_error.size(); ++i)
        CHECK(back.std_error[i] == d.std_error[i]);
    CHECK(back.meta.kind == d.meta.kind);
    CHECK(back.meta.marginalization == d.meta.marginalization);
}

TEST_CASE("sample file round-trips") {
    Distribution coin;
    coin.support = {{{1, 0}, 0.5}, {{0, 1}, 0.5}};
    SampleSet set = draw_samples(coin, 50, 17);
    std::stringstream ss;
    write_samples(ss, set);
    SampleSet back = read_samples(ss);
    CHECK(back.samples == set.samples);
    CHECK(back.seed == set.seed);
}

TEST_CASE("outcome cap triggers a resource error") {
    InterferometerSpec spec = make_spec(4, 1, 2, 107, 2);
    CHECK_THROWS_AS(full_distribution(spec, 2, SamplerKind::Quantum, FeedbackKind::Looped, 10),
                    ResourceError);
}
