#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lpq/closedform.hpp"
#include "lpq/errors.hpp"
#include "lpq/offset.hpp"
#include "lpq/oracle.hpp"
#include "lpq/random.hpp"
#include "lpq/recovery.hpp"
#include "lpq/simulator.hpp"

namespace lpq {

/// Trials-to-first-success law: E[X] = 1/p, Var[X] = (1-p)/p^2.
struct GeometricStats {
    double p = 1.0;
    double expected_trials = 1.0;
    double variance = 0.0;
};

inline GeometricStats geometric_stats(double p) {
    if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::InvalidProbability, "success probability must lie in (0, 1], got " + std::to_string(p));
    }
    return GeometricStats{p, 1.0 / p, (1.0 - p) / (p * p)};
}

/// Checks the qualifying convergents of a recovery against the oracle,
/// largest denominator first, and returns the first one that passes
/// test_period_known_s. `rejected` receives the number of false candidates.
inline std::optional<std::int64_t> verified_period(const RecoveryResult &rec, const OracleHandle &oracle, label_t s,
                                                   label_t m, std::int64_t *rejected = nullptr) {
    for (const auto &c : rec.qualifying) {
        if (test_period_known_s(oracle, s, c.q, m)) return c.q;
        if (rejected) ++*rejected;
    }
    return std::nullopt;
}

/// What counts as a successful trial.
enum class SuccessModel {
    /// some qualifying convergent of y/N passes test_period_known_s; this is
    /// the event the Monte-Carlo harness counts.
    Pipeline,
    /// y lands in success_set (the exact resonance points only).
    SuccessSet,
};

/// Exact per-trial probability that a measurement of `table` leads to a
/// verified period: sum of Pr(y) over the y whose continued-fraction
/// candidate passes the oracle check.
inline double pipeline_success_probability(const ProbabilityTable &table, const OracleSpec &spec,
                                           std::optional<std::int64_t> q_max = std::nullopt) {
    const OracleHandle oracle(spec);
    double acc = 0.0;
    for (const auto &e : table.entries) {
        if (e.pr == 0.0) continue;
        if (verified_period(recover_period(e.y, spec.n, q_max), oracle, spec.s, spec.m)) acc += e.pr;
    }
    return acc;
}

inline double pipeline_success_probability(Algorithm alg, const OracleSpec &spec,
                                           std::optional<std::int64_t> q_max = std::nullopt) {
    return pipeline_success_probability(closed_form_table(alg, spec), spec, q_max);
}

inline double trial_success_probability(Algorithm alg, const OracleSpec &spec, SuccessModel model) {
    return model == SuccessModel::Pipeline ? pipeline_success_probability(alg, spec)
                                           : success_probability(alg, spec);
}

/// Lower bound on E[X] from p <= 1 - Pr(y = 0):
/// N / (4M(1 - M/N)) for QFT, N / (2M(1 - M/N)) for QHS, 1/sin^2(2k theta) amplified.
inline double expected_trials_lower_bound(Algorithm alg, const OracleSpec &spec) {
    const double n = static_cast<double>(spec.n), m = static_cast<double>(spec.m);
    switch (alg) {
        case Algorithm::Qft: return n / (4.0 * m * (1.0 - m / n));
        case Algorithm::Qhs: return n / (2.0 * m * (1.0 - m / n));
        case Algorithm::Amplified: {
            const auto g = grover_schedule(spec.n, spec.m);
            const double s = std::sin(static_cast<double>(2 * g.k) * g.theta);
            return 1.0 / (s * s);
        }
    }
    return 1.0;
}

inline GeometricStats expected_trials(Algorithm alg, const OracleSpec &spec,
                                      SuccessModel model = SuccessModel::Pipeline) {
    return geometric_stats(trial_success_probability(alg, spec, model));
}

/// Cost of one algorithm in oracle/transform applications.
struct WorkfactorReport {
    Algorithm algorithm = Algorithm::Amplified;
    double per_run_cost = 1.0;
    double success_probability = 0.0;
    double expected_runs = 0.0;
    double variance_runs = 0.0;
    double total_cost = 0.0;
    double ratio_vs_amplified = 1.0;
    double analytic_lower_bound = 0.0;  ///< bound on expected runs from Pr(y=0) alone
    bool bound_holds = true;
};

/// Amplified-QFT costs k Grover iterations plus one transform per run; QFT and
/// QHS cost one transform per run and E[X] runs. ratio_vs_amplified is
/// total / (k + 1).
inline std::vector<WorkfactorReport> workfactor_comparison(const OracleSpec &spec,
                                                           SuccessModel model = SuccessModel::Pipeline) {
    const auto g = grover_schedule(spec.n, spec.m);
    const double amplified_cost = static_cast<double>(g.k + 1);
    std::vector<WorkfactorReport> rows;
    for (Algorithm alg : {Algorithm::Amplified, Algorithm::Qft, Algorithm::Qhs}) {
        WorkfactorReport r;
        r.algorithm = alg;
        r.success_probability = trial_success_probability(alg, spec, model);
        const auto stats = geometric_stats(r.success_probability);
        r.expected_runs = stats.expected_trials;
        r.variance_runs = stats.variance;
        r.analytic_lower_bound = expected_trials_lower_bound(alg, spec);
        r.bound_holds = r.expected_runs >= r.analytic_lower_bound * (1.0 - 1e-12);
        if (alg == Algorithm::Amplified) {
            r.per_run_cost = amplified_cost;
            r.total_cost = amplified_cost;
        } else {
            r.per_run_cost = 1.0;
            r.total_cost = r.expected_runs;
        }
        r.ratio_vs_amplified = r.total_cost / amplified_cost;
        rows.push_back(r);
    }
    return rows;
}

/// Monte-Carlo trials-to-success summary.
struct EmpiricalStats {
    std::int64_t runs = 0;
    double mean = 0.0;
    double variance = 0.0;  ///< unbiased sample variance
    double ci95_low = 0.0;
    double ci95_high = 0.0;
    std::int64_t total_trials = 0;
    std::int64_t false_candidates = 0;  ///< recoveries rejected by the oracle check
    std::vector<std::int64_t> trials;   ///< per run
};

struct MonteCarloOptions {
    std::int64_t max_trials_per_run = 10'000'000;
    std::optional<std::int64_t> q_max;
};

/// Repeats sample -> recover_period -> verified_period until the oracle
/// confirms the period, `runs` times. Run i draws from derive_seed(seed, i),
/// so runs are independent and the result does not depend on evaluation
/// order. The true s is known to the harness and used only for verification.
inline EmpiricalStats monte_carlo_trials(Algorithm alg, const OracleSpec &spec, std::int64_t runs, std::uint64_t seed,
                                         const MonteCarloOptions &options = {}) {
    if (runs < 1) throw Error(ErrorCode::InvalidArgument, "runs must be >= 1");
    const auto table = closed_form_table(alg, spec);
    const Sampler sampler(table);
    const OracleHandle oracle(spec);

    // Recovery only depends on y; memoize the verdict and the number of
    // rejected candidates per label.
    struct Verdict {
        bool known = false;
        bool success = false;
        std::int64_t rejected = 0;
    };
    std::vector<Verdict> verdicts(static_cast<std::size_t>(spec.n));
    auto succeeds = [&](label_t y, EmpiricalStats &stats) {
        auto &v = verdicts[static_cast<std::size_t>(y)];
        if (!v.known) {
            v.known = true;
            v.success = verified_period(recover_period(y, spec.n, options.q_max), oracle, spec.s, spec.m,
                                        &v.rejected)
                            .has_value();
        }
        stats.false_candidates += v.rejected;
        return v.success;
    };

    EmpiricalStats stats;
    stats.runs = runs;
    stats.trials.reserve(static_cast<std::size_t>(runs));
    // Welford accumulation.
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t run = 0; run < runs; ++run) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(run)));
        std::int64_t trials = 0;
        while (true) {
            if (++trials > options.max_trials_per_run) {
                throw Error(ErrorCode::NonTermination,
                            "no verified period within " + std::to_string(options.max_trials_per_run) + " trials");
            }
            if (succeeds(sampler.draw(rng), stats)) break;
        }
        stats.trials.push_back(trials);
        stats.total_trials += trials;
        const double delta = static_cast<double>(trials) - mean;
        mean += delta / static_cast<double>(run + 1);
        m2 += delta * (static_cast<double>(trials) - mean);
    }
    stats.mean = mean;
    stats.variance = runs > 1 ? m2 / static_cast<double>(runs - 1) : 0.0;
    const double half = 1.959963984540054 * std::sqrt(stats.variance / static_cast<double>(runs));
    stats.ci95_low = mean - half;
    stats.ci95_high = mean + half;
    return stats;
}

/// Two-sided normal-approximation interval for the mean of `runs` geometric
/// draws with success probability p.
struct Interval {
    double low = 0.0;
    double high = 0.0;
    [[nodiscard]] bool contains(double v) const { return v >= low && v <= high; }
};

inline Interval geometric_mean_interval(double p, std::int64_t runs, double z) {
    const auto g = geometric_stats(p);
    const double half = z * std::sqrt(g.variance / static_cast<double>(runs));
    return {g.expected_trials - half, g.expected_trials + half};
}

inline constexpr double kZ99 = 2.5758293035489004;

/// AmpRatio(y) = (N / (-2M)) tan(theta) sin(2k theta) for any final unitary
/// whose row y sums to zero; PrRatio is its square and shares the QFT bounds.
struct GeneralUnitaryRatio {
    RatioBounds bounds;
    double amp_ratio = 0.0;
    double pr_ratio = 0.0;
};

inline GeneralUnitaryRatio general_unitary_ratio(label_t n, label_t m) {
    const auto spec = build_oracle(n, m, 1, 0, /*strict=*/false);
    if (2 * m > n) throw Error(ErrorCode::MarkedSetTooLarge, "general_unitary_ratio needs 2M <= N");
    const auto g = grover_schedule(n, m);
    GeneralUnitaryRatio out;
    out.bounds = pr_ratio_bounds(spec, Baseline::Qft);
    out.amp_ratio = static_cast<double>(n) / (-2.0 * static_cast<double>(m)) * std::tan(g.theta) *
                    std::sin(static_cast<double>(2 * g.k) * g.theta);
    out.pr_ratio = out.amp_ratio * out.amp_ratio;
    return out;
}

/// One row of the work-factor sweep over N = 2^j.
struct SweepRow {
    OracleSpec spec;
    std::int64_t k = 0;
    std::vector<WorkfactorReport> reports;
    double sqrt_n_over_m = 0.0;
    double normalized_ratio_qft = 0.0;  ///< ratio_vs_amplified / sqrt(N/M)
    double normalized_ratio_qhs = 0.0;
};

inline std::vector<SweepRow> workfactor_sweep(label_t m, std::int64_t p, label_t s, int log2_min, int log2_max,
                                              SuccessModel model = SuccessModel::Pipeline) {
    std::vector<SweepRow> rows;
    for (int j = log2_min; j <= log2_max; ++j) {
        SweepRow row;
        row.spec = build_oracle(label_t{1} << j, m, p, s, /*strict=*/true);
        row.k = grover_schedule(row.spec.n, m).k;
        row.reports = workfactor_comparison(row.spec, model);
        row.sqrt_n_over_m = std::sqrt(static_cast<double>(row.spec.n) / static_cast<double>(m));
        row.normalized_ratio_qft = row.reports[1].ratio_vs_amplified / row.sqrt_n_over_m;
        row.normalized_ratio_qhs = row.reports[2].ratio_vs_amplified / row.sqrt_n_over_m;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace lpq
