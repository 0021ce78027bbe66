#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string_view>
#include <vector>

#include "lpq/closedform.hpp"
#include "lpq/errors.hpp"
#include "lpq/oracle.hpp"
#include "lpq/spectrum.hpp"

namespace lpq {

/// Simple continued fraction [a0; a1, a2, ...] of a non-negative rational.
/// Canonical: the last quotient is at least 2 whenever there is more than one.
struct ContinuedFraction {
    std::vector<std::int64_t> quotients;
};

/// Convergent d/q of a continued fraction, always in lowest terms.
struct Convergent {
    std::int64_t d = 0;
    std::int64_t q = 1;

    friend bool operator==(const Convergent &, const Convergent &) = default;
};

inline ContinuedFraction continued_fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorCode::ZeroDenominator, "continued fraction of " + std::to_string(num) + "/0");
    if (num < 0 || den < 0) throw Error(ErrorCode::InvalidArgument, "continued fraction needs num >= 0, den >= 1");
    ContinuedFraction cf;
    // Euclid on (num, den); the quotient sequence is the expansion.
    while (den != 0) {
        cf.quotients.push_back(num / den);
        const std::int64_t rem = num % den;
        num = den;
        den = rem;
    }
    return cf;
}

/// p_i = a_i p_{i-1} + p_{i-2}, q_i = a_i q_{i-1} + q_{i-2}.
inline std::vector<Convergent> convergents(const ContinuedFraction &cf) {
    std::vector<Convergent> out;
    out.reserve(cf.quotients.size());
    std::int64_t p_prev = 1, p_prev2 = 0;
    std::int64_t q_prev = 0, q_prev2 = 1;
    for (std::int64_t a : cf.quotients) {
        const std::int64_t p = a * p_prev + p_prev2;
        const std::int64_t q = a * q_prev + q_prev2;
        out.push_back({p, q});
        p_prev2 = p_prev;
        p_prev = p;
        q_prev2 = q_prev;
        q_prev = q;
    }
    return out;
}

/// True iff |y/N - d/q| <= 1/(2 q^2), evaluated exactly as 2q|yq - dN| <= N.
inline bool within_convergent_bound(std::int64_t y, std::int64_t n, const Convergent &c) {
    const std::int64_t diff = y * c.q - c.d * n;
    return 2 * c.q * (diff < 0 ? -diff : diff) <= n;
}

enum class RecoveryStatus { Recovered, NoCandidate, GcdObstruction };

constexpr std::string_view to_string(RecoveryStatus s) noexcept {
    switch (s) {
        case RecoveryStatus::Recovered: return "Recovered";
        case RecoveryStatus::NoCandidate: return "NoCandidate";
        case RecoveryStatus::GcdObstruction: return "GcdObstruction";
    }
    return "Unknown";
}

struct RecoveryResult {
    label_t y = 0;
    label_t n = 0;
    std::vector<Convergent> candidates;  ///< every convergent of y/N, in order
    std::vector<Convergent> qualifying;  ///< 2 <= q <= q_max within 1/(2q^2), largest q first
    std::optional<std::int64_t> accepted;
    std::optional<std::int64_t> accepted_numerator;
    RecoveryStatus status = RecoveryStatus::NoCandidate;
};

inline std::int64_t default_q_max(label_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Reads a putative period off the continued fraction of y/N: the convergent
/// d/q with the largest q <= q_max that satisfies |y/N - d/q| <= 1/(2q^2).
/// All convergents passing that test are kept in `qualifying` so a verifier
/// can fall back to smaller denominators. q = 1 carries no period and y = 0
/// carries no information at all; both end in NoCandidate. The oracle is
/// never consulted here.
inline RecoveryResult recover_period(label_t y, label_t n, std::optional<std::int64_t> q_max = std::nullopt) {
    if (n <= 0) throw Error(ErrorCode::DegenerateInstance, "recover_period needs N >= 1");
    if (y < 0 || y >= n) throw Error(ErrorCode::LabelOutOfRange, "y=" + std::to_string(y) + " outside 0..N-1");
    const std::int64_t limit = q_max.value_or(default_q_max(n));

    RecoveryResult result;
    result.y = y;
    result.n = n;
    result.candidates = convergents(continued_fraction(y, n));
    if (y == 0) return result;

    for (auto it = result.candidates.rbegin(); it != result.candidates.rend(); ++it) {
        if (it->q < 2 || it->q > limit) continue;
        if (within_convergent_bound(y, n, *it)) result.qualifying.push_back(*it);
    }
    if (!result.qualifying.empty()) {
        result.accepted = result.qualifying.front().q;
        result.accepted_numerator = result.qualifying.front().d;
    }
    result.status = result.accepted ? RecoveryStatus::Recovered : RecoveryStatus::NoCandidate;
    return result;
}

/// {a}_N, the representative of a mod N in (-N/2, N/2].
inline std::int64_t smallest_residue(std::int64_t a, std::int64_t n) {
    if (n <= 0) throw Error(ErrorCode::InvalidArgument, "modulus must be positive");
    std::int64_t r = a % n;
    if (r < 0) r += n;
    if (2 * r > n) r -= n;
    return r;
}

/// round(x / den) for x >= 0, halves rounded up.
inline std::int64_t round_div(std::int64_t x, std::int64_t den) { return (2 * x + den) / (2 * den); }

/// d(y) = round(P y / N).
inline std::int64_t y_to_d(label_t y, label_t n, std::int64_t p) { return round_div(p * y, n); }

/// y(d) = round(N d / P).
inline label_t d_to_y(std::int64_t d, label_t n, std::int64_t p) { return round_div(n * d, p); }

/// Membership in Y = {y : -P/2 < {Py}_N <= P/2}. The half-open window makes
/// y_to_d / d_to_y a bijection between Y and 0..P-1 even when N d / P is a
/// half-integer.
inline bool in_period_window(label_t y, label_t n, std::int64_t p) {
    const std::int64_t r = smallest_residue(p * y, n);
    return -p < 2 * r && 2 * r <= p;
}

/// S = {y in Y : y != 0, gcd(d(y), P) = 1}; the same set for all three algorithms.
inline std::vector<label_t> success_set(const OracleSpec &spec) {
    std::vector<label_t> out;
    for (std::int64_t d = 1; d < spec.p; ++d) {
        if (std::gcd(d, spec.p) != 1) continue;
        out.push_back(d_to_y(d, spec.n, spec.p));
    }
    return out;
}

inline double success_probability(const ProbabilityTable &table, const OracleSpec &spec) {
    double acc = 0.0;
    for (label_t y : success_set(spec)) acc += table.pr(y);
    return acc;
}

inline double success_probability(Algorithm alg, const OracleSpec &spec) {
    return success_probability(closed_form_table(alg, spec), spec);
}

/// Why a measured y did or did not reveal the true period. Unlike
/// recover_period this looks at the true P, so it is a diagnostic only.
inline RecoveryStatus explain_outcome(label_t y, const OracleSpec &spec,
                                      std::optional<std::int64_t> q_max = std::nullopt) {
    const auto result = recover_period(y, spec.n, q_max);
    if (result.accepted == spec.p) return RecoveryStatus::Recovered;
    if (y != 0 && in_period_window(y, spec.n, spec.p) && std::gcd(y_to_d(y, spec.n, spec.p), spec.p) != 1) {
        return RecoveryStatus::GcdObstruction;
    }
    return RecoveryStatus::NoCandidate;
}

inline std::int64_t euler_totient(std::int64_t p) {
    if (p < 1) throw Error(ErrorCode::InvalidArgument, "totient needs P >= 1");
    std::int64_t result = p;
    for (std::int64_t f = 2; f * f <= p; ++f) {
        if (p % f != 0) continue;
        while (p % f == 0) p /= f;
        result -= result / f;
    }
    if (p > 1) result -= result / p;
    return result;
}

/// phi(P)/P, the chance that a uniformly random d in 0..P-1 is coprime to P.
inline double totient_ratio(std::int64_t p) {
    return static_cast<double>(euler_totient(p)) / static_cast<double>(p);
}

}  // namespace lpq
