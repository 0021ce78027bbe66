#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "lpq/closedform.hpp"
#include "lpq/simulator.hpp"
#include "support.hpp"

using namespace lpq;

TEST(UniformState, Examples) {
    const auto s4 = uniform_state(4);
    for (label_t z = 0; z < 4; ++z) EXPECT_DOUBLE_EQ(s4[z].real(), 0.5);
    EXPECT_DOUBLE_EQ(uniform_state(1)[0].real(), 1.0);
    const auto s16 = uniform_state(16);
    for (label_t z = 0; z < 16; ++z) EXPECT_DOUBLE_EQ(s16[z].real(), 0.25);
    EXPECT_NEAR(s16.norm(), 1.0, 1e-15);
}

TEST(GroverSchedule, ExactQuarterCase) {
    const auto g = grover_schedule(4, 1);
    EXPECT_DOUBLE_EQ(g.theta, std::numbers::pi / 6);
    EXPECT_EQ(g.k, 1);
    EXPECT_NEAR(g.a_k, 1.0, 1e-15);
    EXPECT_NEAR(g.b_k, 0.0, 1e-15);
}

TEST(GroverSchedule, AllMarked) {
    const auto g = grover_schedule(8, 8);
    EXPECT_DOUBLE_EQ(g.theta, std::numbers::pi / 2);
    EXPECT_EQ(g.k, 0);
    EXPECT_DOUBLE_EQ(g.good_probability(), 1.0);
}

TEST(GroverSchedule, HalfMarkedFloorIsExact) {
    // pi / (4 * pi/4) is exactly 1.
    EXPECT_EQ(grover_schedule(16, 8).k, 1);
    EXPECT_EQ(grover_schedule(1024, 512).k, 1);
}

TEST(GroverSchedule, NormalizedAndMatchesRecursion) {
    for (label_t n = 2; n <= 300; ++n) {
        for (label_t m = 1; m <= n; ++m) {
            const auto g = grover_schedule(n, m);
            ASSERT_NEAR(m * g.a_k * g.a_k + (n - m) * g.b_k * g.b_k, 1.0, 1e-12);
            const auto [a, b] = support::grover_pair(n, m, g.k);
            ASSERT_NEAR(g.a_k, static_cast<double>(a), 1e-10) << n << ' ' << m;
            // With every label marked there is no unmarked amplitude to compare.
            if (m < n) {
                ASSERT_NEAR(g.b_k, static_cast<double>(b), 1e-10) << n << ' ' << m;
            }
        }
    }
}

TEST(GroverIterate, ExactQuarterCase) {
    const auto spec = build_oracle(4, 1, 1, 2);
    const auto out = grover_iterate(uniform_state(4), spec);
    for (label_t z = 0; z < 4; ++z) EXPECT_NEAR(std::abs(out[z]), z == 2 ? 1.0 : 0.0, 1e-15);
}

TEST(GroverIterate, AllMarkedIsMinusIdentityOnUniform) {
    const auto spec = build_oracle(8, 8, 1, 0, false);
    StateVector state{std::vector<cplx>(8)};
    Rng rng(3);
    for (auto &a : state.amplitudes) a = {rng.uniform(), rng.uniform()};
    const double n0 = state.norm();
    const auto out = grover_iterate(state, spec);
    EXPECT_NEAR(out.norm(), n0, 1e-12);
    // Flip everything, then reflect about the mean: z -> 2 mean(-v) + v.
    cplx mean{0.0, 0.0};
    for (const auto &a : state.amplitudes) mean += a;
    mean /= 8.0;
    for (label_t z = 0; z < 8; ++z) EXPECT_NEAR(std::abs(out[z] - (-2.0 * mean + state[z])), 0.0, 1e-12);
}

TEST(GroverIterate, KStepsGiveScheduleAmplitudes) {
    const auto spec = build_oracle(16, 3, 4, 1);
    const auto g = grover_schedule(16, 3);
    StateVector state = uniform_state(16);
    for (std::int64_t i = 0; i < g.k; ++i) state = grover_iterate(std::move(state), spec);
    for (label_t z = 0; z < 16; ++z) {
        EXPECT_NEAR(std::abs(state[z] - cplx{spec.contains(z) ? g.a_k : g.b_k, 0.0}), 0.0, 1e-10);
    }
}

TEST(Dft, ConstantAndDelta) {
    const auto out = dft(uniform_state(16));
    EXPECT_NEAR(std::abs(out[0] - 1.0), 0.0, 1e-15);
    for (label_t y = 1; y < 16; ++y) EXPECT_NEAR(std::abs(out[y]), 0.0, 1e-15);
    StateVector delta{std::vector<cplx>(16)};
    delta[0] = 1.0;
    const auto flat = dft(delta);
    for (label_t y = 0; y < 16; ++y) EXPECT_NEAR(std::abs(flat[y] - 0.25), 0.0, 1e-15);
}

TEST(Dft, SignConvention) {
    // omega = exp(-2 pi i / N): a delta at z = 1 maps to exp(-2 pi i y / N) / sqrt(N).
    StateVector delta{std::vector<cplx>(8)};
    delta[1] = 1.0;
    for (auto path : {DftPath::Direct, DftPath::Fast}) {
        const auto out = dft(delta, DftSign::Forward, path);
        for (label_t y = 0; y < 8; ++y) {
            const cplx expect = std::polar(1.0 / std::sqrt(8.0), -2.0 * std::numbers::pi * y / 8.0);
            EXPECT_NEAR(std::abs(out[y] - expect), 0.0, 1e-14);
        }
    }
}

TEST(Dft, FastMatchesDirectAndInverts) {
    Rng rng(11);
    for (label_t n : {1, 2, 3, 5, 12, 16, 17, 64, 97, 255, 256}) {
        StateVector v{std::vector<cplx>(static_cast<std::size_t>(n))};
        for (auto &a : v.amplitudes) a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
        for (auto sign : {DftSign::Forward, DftSign::Inverse}) {
            const auto fast = dft(v, sign, DftPath::Fast);
            const auto direct = dft(v, sign, DftPath::Direct);
            for (label_t y = 0; y < n; ++y) ASSERT_NEAR(std::abs(fast[y] - direct[y]), 0.0, 1e-12) << n;
        }
        const auto back = dft(dft(v), DftSign::Inverse);
        for (label_t z = 0; z < n; ++z) ASSERT_NEAR(std::abs(back[z] - v[z]), 0.0, 1e-12);
        EXPECT_NEAR(dft(v).norm(), v.norm(), 1e-12);
    }
}

TEST(Simulator, CentralCrossCheck) {
    const auto spec = build_oracle(16, 3, 4, 1);
    const auto g = grover_schedule(16, 3);
    const auto pr = probabilities(amplified_qft_state(spec));
    for (label_t y = 0; y < 16; ++y) EXPECT_NEAR(pr[static_cast<std::size_t>(y)], amplified_pr(y, spec, g), 1e-9);
}

// The simulator against the long-double direct sums in support.hpp.
TEST(Simulator, MatchesDirectSumReference) {
    support::for_each_strict_spec(2, 40, [](const OracleSpec &spec) {
        const auto g = grover_schedule(spec.n, spec.m);
        const auto refs = {std::pair{Algorithm::Amplified, support::reference_amplified(spec, g.k)},
                           std::pair{Algorithm::Qft, support::reference_qft(spec)},
                           std::pair{Algorithm::Qhs, support::reference_qhs(spec)}};
        for (const auto &[alg, ref] : refs) {
            for (auto path : {DftPath::Fast, DftPath::Direct}) {
                const auto table = simulated_table(alg, spec, std::nullopt, path);
                for (label_t y = 0; y < spec.n; ++y) {
                    ASSERT_NEAR(table.pr(y), ref[static_cast<std::size_t>(y)], 1e-12)
                        << to_string(alg) << " N=" << spec.n << " M=" << spec.m << " P=" << spec.p << " s=" << spec.s
                        << " y=" << y;
                }
            }
        }
    });
}

TEST(QftState, Examples) {
    const auto spec = build_oracle(16, 3, 4, 1);
    const auto pr = probabilities(qft_state(spec));
    EXPECT_NEAR(pr[0], 0.390625, 1e-12);
    EXPECT_NEAR(probabilities(qft_state(build_oracle(16, 8, 1, 0)))[0], 0.0, 1e-15);
}

TEST(QhsDistribution, Examples) {
    const auto t = qhs_distribution(build_oracle(16, 3, 4, 1));
    EXPECT_NEAR(t.pr(0), 0.6953125, 1e-12);
    for (label_t y : {4, 8, 12}) EXPECT_NEAR(t.pr(y), 18.0 / 256.0, 1e-12);
    EXPECT_NEAR(t.total(), 1.0, 1e-9);
    EXPECT_NEAR(qhs_state(build_oracle(16, 3, 4, 1)).norm(), 1.0, 1e-12);
}

TEST(GeneralUnitary, DftReproducesAmplifiedQft) {
    const auto spec = build_oracle(16, 3, 4, 1);
    const LinearMap f = [](std::span<const cplx> v) { return dft(v); };
    const auto a = general_unitary_state(spec, f, true);
    const auto b = amplified_qft_state(spec);
    for (label_t y = 0; y < 16; ++y) EXPECT_NEAR(std::abs(a[y] - b[y]), 0.0, 1e-15);
}

TEST(GeneralUnitary, IdentityGivesGroverWeights) {
    const auto spec = build_oracle(32, 5, 3, 2);
    const auto g = grover_schedule(32, 5);
    const LinearMap id = [](std::span<const cplx> v) { return std::vector<cplx>(v.begin(), v.end()); };
    const auto pr = probabilities(general_unitary_state(spec, id, true));
    for (label_t z = 0; z < 32; ++z) {
        EXPECT_NEAR(pr[static_cast<std::size_t>(z)], spec.contains(z) ? g.a_k * g.a_k : g.b_k * g.b_k, 1e-12);
    }
}

TEST(GeneralUnitary, DeflatedRowRatio) {
    Rng rng(5);
    const auto spec = build_oracle(24, 3, 4, 2);
    const auto g = grover_schedule(24, 3);
    for (label_t y0 : {0, 7, 23}) {
        const auto u = support::deflated_unitary(24, y0, rng);
        cplx row_sum{0.0, 0.0};
        for (label_t z = 0; z < 24; ++z) row_sum += u.at(y0, z);
        ASSERT_NEAR(std::abs(row_sum), 0.0, 1e-12);
        const auto amp = general_unitary_state(spec, u.as_map(), true);
        const auto plain = general_unitary_state(spec, u.as_map(), false);
        const cplx ratio = amp[y0] / plain[y0];
        EXPECT_NEAR(std::abs(ratio - cplx{(g.a_k - g.b_k) * std::sqrt(24.0) / -2.0, 0.0}), 0.0, 1e-8);
    }
}

TEST(GeneralUnitary, RejectsNonUnitary) {
    const LinearMap twice = [](std::span<const cplx> v) {
        std::vector<cplx> out(v.begin(), v.end());
        for (auto &c : out) c *= 2.0;
        return out;
    };
    try {
        (void)general_unitary_state(build_oracle(16, 3, 4, 1), twice, true);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotUnitary);
    }
}

TEST(Sample, DeltaAndDeterminism) {
    const auto spec = build_oracle(16, 3, 4, 1);
    auto delta = closed_form_table(Algorithm::Qft, spec);
    for (auto &e : delta.entries) e.pr = e.y == 0 ? 1.0 : 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_EQ(sample(delta, seed), 0);
    const auto table = closed_form_table(Algorithm::Amplified, spec);
    for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_EQ(sample(table, seed), sample(table, seed));
}

// 10^5 draws, every cell within 4 sigma of its multinomial expectation
// (about 3 sigma per cell after a Bonferroni correction over 192 cells).
TEST(Sample, EmpiricalFrequencies) {
    const auto spec = build_oracle(64, 5, 7, 3);
    for (Algorithm alg : {Algorithm::Amplified, Algorithm::Qft, Algorithm::Qhs}) {
        const auto table = closed_form_table(alg, spec);
        const Sampler sampler(table);
        Rng rng(99);
        constexpr int kDraws = 100000;
        std::vector<int> counts(64);
        for (int i = 0; i < kDraws; ++i) ++counts[static_cast<std::size_t>(sampler.draw(rng))];
        for (label_t y = 0; y < 64; ++y) {
            const double p = table.pr(y);
            const double sigma = std::sqrt(kDraws * p * (1 - p));
            EXPECT_LE(std::abs(counts[static_cast<std::size_t>(y)] - kDraws * p), 4.0 * sigma + 1e-9)
                << to_string(alg) << " y=" << y;
        }
    }
}

TEST(SoftLimit, EnvironmentOverride) {
    setenv("LPQ_SOFT_N_LIMIT", "128", 1);
    EXPECT_EQ(soft_n_limit(), 128);
    unsetenv("LPQ_SOFT_N_LIMIT");
    EXPECT_EQ(soft_n_limit(), kDefaultSoftNLimit);
}
