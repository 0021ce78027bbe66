#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "lpq/errors.hpp"
#include "lpq/oracle.hpp"
#include "lpq/random.hpp"
#include "lpq/simulator.hpp"

namespace lpq {

/// f(s1) = f(s1 + P1) = f(s1 + (M-1) P1) = 1. When this holds, (s1, P1) is the
/// true (s, P): a smaller s1 misses f(s1), a larger one overshoots the last
/// member, and a wrong P1 overshoots or falls into a gap. Probes past N-1
/// read as 0. For M = 1 the progression has a single element and only f(s1)
/// is informative, so the f(s1 + P1) probe is skipped.
inline bool test_pair(const OracleHandle &oracle, label_t s1, std::int64_t p1, label_t m) {
    if (p1 < 1 || m < 1) return false;
    if (oracle.probe(s1) != 1) return false;
    if (m == 1) return true;
    if (oracle.probe(s1 + p1) != 1) return false;
    return m == 2 || oracle.probe(s1 + (m - 1) * p1) == 1;
}

/// Checks a putative period when the offset is known.
inline bool test_period_known_s(const OracleHandle &oracle, label_t s, std::int64_t p1, label_t m) {
    return test_pair(oracle, s, p1, m);
}

/// First candidate offset that passes test_pair with P1; nullopt means P1 is wrong.
inline std::optional<std::pair<label_t, std::int64_t>> exhaust_offsets(const OracleHandle &oracle,
                                                                       std::span<const label_t> candidates,
                                                                       std::int64_t p1, label_t m) {
    for (label_t s1 : candidates) {
        if (test_pair(oracle, s1, p1, m)) return std::make_pair(s1, p1);
    }
    return std::nullopt;
}

/// Smallest power of two that is >= m.
inline std::int64_t counting_register_size(label_t m) {
    std::int64_t t = 1;
    while (t < m) t <<= 1;
    return t;
}

/// g(x) = max(0, x1 - (x+1) P): walks down the progression from x1.
inline label_t g_function(std::int64_t x, label_t x1, std::int64_t p) {
    const label_t v = x1 - (x + 1) * p;
    return v > 0 ? v : 0;
}

/// Step 1: measure the amplified state {a_k^2 on A, b_k^2 off A}. Returns the
/// measured label; the caller checks membership with f.
inline label_t amplified_measure_member(const OracleHandle &oracle, std::uint64_t seed) {
    const OracleSpec &spec = oracle.spec();
    const auto schedule = grover_schedule(spec.n, spec.m);
    Rng rng(seed);
    const bool good = rng.uniform() < schedule.good_probability();
    const label_t marked = spec.m, unmarked = spec.n - spec.m;
    if ((good && marked > 0) || unmarked == 0) {
        // Uniform over A: the j-th marked label in increasing order.
        const auto j = static_cast<label_t>(rng.below(static_cast<std::uint64_t>(marked)));
        label_t seen = 0;
        for (label_t x = 0; x < spec.n; ++x) {
            if (oracle.is_marked(x) && seen++ == j) return x;
        }
    }
    const auto j = static_cast<label_t>(rng.below(static_cast<std::uint64_t>(unmarked)));
    label_t seen = 0;
    for (label_t x = 0; x < spec.n; ++x) {
        if (!oracle.is_marked(x) && seen++ == j) return x;
    }
    return 0;
}

/// Idealized Exact Quantum Counting: the true count R with probability
/// `confidence`, otherwise a wrong count drawn uniformly from 0..T.
struct CountingContract {
    std::int64_t t = 1;          ///< register size, smallest power of 2 >= M
    std::int64_t r = 0;          ///< count reported by the counter
    std::int64_t true_r = 0;
    double confidence = 2.0 / 3.0;
    bool correct = true;
    std::int64_t charged_cost = 0;  ///< ceil(sqrt((R+1)(T-R+1))) oracle applications
};

enum class SearchMethod { Counting, Decreasing };

constexpr std::string_view to_string(SearchMethod m) noexcept {
    return m == SearchMethod::Counting ? "counting" : "decreasing";
}

enum class SearchStatus { Found, VerificationFailed, NonTermination };

constexpr std::string_view to_string(SearchStatus s) noexcept {
    switch (s) {
        case SearchStatus::Found: return "Found";
        case SearchStatus::VerificationFailed: return "VerificationFailed";
        case SearchStatus::NonTermination: return "NonTermination";
    }
    return "Unknown";
}

/// Transcript of one offset search.
struct OffsetSearchResult {
    SearchMethod method = SearchMethod::Decreasing;
    SearchStatus status = SearchStatus::VerificationFailed;
    std::optional<label_t> offset;
    std::int64_t p_candidate = 0;
    std::vector<label_t> history;         ///< measured members, strictly decreasing
    std::int64_t iterations = 0;          ///< amplify-and-measure rounds of the descent
    std::int64_t retries = 0;             ///< rounds whose measurement missed A
    std::uint64_t classical_queries = 0;  ///< f evaluations charged to the handle
    std::uint64_t loop_queries = 0;       ///< the part of classical_queries spent inside the descent
    std::int64_t quantum_oracle_calls = 0;
    std::optional<CountingContract> counting;
    std::vector<std::pair<label_t, bool>> verifications;  ///< (candidate s, test_pair outcome)
};

struct OffsetSearchOptions {
    double counter_confidence = 2.0 / 3.0;
    int measurement_retry_cap = 16;
};

namespace detail {

inline void finish_with_candidate(const OracleHandle &oracle, OffsetSearchResult &out, label_t candidate,
                                  std::int64_t p, label_t m) {
    const bool ok = candidate >= 0 && test_pair(oracle, candidate, p, m);
    out.verifications.emplace_back(candidate, ok);
    if (ok) {
        out.status = SearchStatus::Found;
        out.offset = candidate;
    } else {
        out.status = SearchStatus::VerificationFailed;
    }
}

/// Shared prefix of both methods: f(0) settles s = 0 outright, otherwise
/// Step 1 measures a member x1 of A. Returns nullopt when the search already
/// finished (s = 0 or no member within the retry cap).
inline std::optional<label_t> locate_first_member(const OracleHandle &oracle, OffsetSearchResult &out,
                                                  std::int64_t p, label_t m, Rng &rng,
                                                  const OffsetSearchOptions &options) {
    if (oracle.probe(0) == 1) {
        finish_with_candidate(oracle, out, 0, p, m);
        return std::nullopt;
    }
    const auto schedule = grover_schedule(oracle.spec().n, oracle.spec().m);
    for (int attempt = 0; attempt <= options.measurement_retry_cap; ++attempt) {
        out.quantum_oracle_calls += schedule.k;
        const label_t x1 = amplified_measure_member(oracle, rng.next());
        if (oracle.probe(x1) == 1) {
            out.history.push_back(x1);
            return x1;
        }
        ++out.retries;
    }
    out.status = SearchStatus::NonTermination;
    return std::nullopt;
}

}  // namespace detail

/// Step 1 followed by Step 2: count R = |{x < T : f(g(x)) = 1}| with the
/// idealized counter and read off s = x1 - R P, then verify.
inline OffsetSearchResult find_offset_counting(const OracleHandle &oracle, std::int64_t p, label_t m,
                                               std::uint64_t seed, const OffsetSearchOptions &options = {}) {
    const std::uint64_t start_queries = oracle.query_count();
    OffsetSearchResult out;
    out.method = SearchMethod::Counting;
    out.p_candidate = p;
    Rng rng(seed);

    const auto x1 = detail::locate_first_member(oracle, out, p, m, rng, options);
    if (x1) {
        if (oracle.probe(*x1 - p) == 0) {
            // Either x1 = s or P is wrong; the verification decides which.
            detail::finish_with_candidate(oracle, out, *x1, p, m);
        } else {
            CountingContract c;
            c.t = counting_register_size(m);
            c.confidence = options.counter_confidence;
            for (std::int64_t x = 0; x < c.t; ++x) {
                if (oracle.is_marked(g_function(x, *x1, p))) ++c.true_r;
            }
            c.correct = rng.uniform() < c.confidence;
            if (c.correct) {
                c.r = c.true_r;
            } else {
                // Uniform over {0..T} \ {true R}.
                auto wrong = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(c.t)));
                c.r = wrong >= c.true_r ? wrong + 1 : wrong;
            }
            c.charged_cost = static_cast<std::int64_t>(
                std::ceil(std::sqrt(static_cast<double>((c.r + 1) * (c.t - c.r + 1)))));
            out.quantum_oracle_calls += c.charged_cost;
            out.counting = c;
            detail::finish_with_candidate(oracle, out, *x1 - c.r * p, p, m);
        }
    }
    out.classical_queries = oracle.query_count() - start_queries;
    return out;
}

/// Step 1 followed by Step 2': repeatedly amplify the members below the
/// current one inside the T-point image of g and measure, so the members seen
/// form a decreasing sequence ending at s. A round whose measurement is not a
/// member is retried (at most measurement_retry_cap times in a row).
inline OffsetSearchResult find_offset_decreasing(const OracleHandle &oracle, std::int64_t p, label_t m,
                                                 std::uint64_t seed, const OffsetSearchOptions &options = {}) {
    const std::uint64_t start_queries = oracle.query_count();
    OffsetSearchResult out;
    out.method = SearchMethod::Decreasing;
    out.p_candidate = p;
    Rng rng(seed);

    auto x_current = detail::locate_first_member(oracle, out, p, m, rng, options);
    if (!x_current) {
        out.classical_queries = oracle.query_count() - start_queries;
        return out;
    }

    const std::int64_t t = counting_register_size(m);
    const auto guard = static_cast<std::int64_t>(64 * std::ceil(std::log2(static_cast<double>(m)) + 1.0));
    int consecutive_misses = 0;
    std::vector<char> mask(static_cast<std::size_t>(t));

    while (true) {
        if (oracle.probe(*x_current - p) == 0) {
            detail::finish_with_candidate(oracle, out, *x_current, p, m);
            break;
        }
        if (out.iterations >= guard || consecutive_misses > options.measurement_retry_cap) {
            out.status = SearchStatus::NonTermination;
            break;
        }
        ++out.iterations;
        const std::uint64_t round_start = oracle.query_count();

        std::int64_t marked = 0;
        for (std::int64_t x = 0; x < t; ++x) {
            mask[static_cast<std::size_t>(x)] = static_cast<char>(oracle.probe(g_function(x, *x_current, p)));
            marked += mask[static_cast<std::size_t>(x)];
        }
        // f(x_current - P) = 1 put g(0) in A, so at least one x is marked.
        const auto schedule = grover_schedule(t, marked);
        StateVector state = uniform_state(t);
        for (std::int64_t i = 0; i < schedule.k; ++i) state = grover_iterate(std::move(state), mask);
        out.quantum_oracle_calls += schedule.k;

        const label_t x = Sampler(probabilities(state)).draw(rng);
        const label_t measured = g_function(x, *x_current, p);
        if (oracle.probe(measured) == 1) {
            consecutive_misses = 0;
            x_current = measured;
            out.history.push_back(measured);
        } else {
            ++consecutive_misses;
            ++out.retries;
        }
        out.loop_queries += oracle.query_count() - round_start;
    }
    out.classical_queries = oracle.query_count() - start_queries;
    return out;
}

}  // namespace lpq
