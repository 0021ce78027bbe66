#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "lpq/errors.hpp"
#include "lpq/oracle.hpp"
#include "lpq/simulator.hpp"
#include "lpq/spectrum.hpp"

// Exact case tables for the three measurement distributions and the ratio
// bounds between them.
//
// With R(y) = sin^2(pi M P y / N) / sin^2(pi P y / N):
//
//   case       Amplified-QFT                   QFT              QHS
//   Zero       cos^2(2k theta)                 (1 - 2M/N)^2     1 - 2M(N-M)/N^2
//   Resonant   tan^2(theta) sin^2(2k theta)    4 M^2 / N^2      2 M^2 / N^2
//   Generic    the Resonant value * R / M^2    4 R / N^2        2 R / N^2
//   Null       0                               0                0
namespace lpq {

namespace detail {

/// sin(pi * j / n) evaluated on the smaller of j and n - j, so the argument
/// never exceeds pi/2 and no large multiple of pi is ever formed.
inline double sin_pi_residue(label_t j, label_t n) {
    const label_t r = std::min(j, n - j);
    return std::sin(std::numbers::pi * static_cast<double>(r) / static_cast<double>(n));
}

inline label_t mul_mod(label_t a, label_t b, label_t n) { return (a % n) * (b % n) % n; }

}  // namespace detail

/// R(y) for Generic and Null frequencies; 0 <= R <= M^2.
inline double dirichlet_ratio(label_t y, const OracleSpec &spec) {
    const SpectrumCase c = classify(y, spec);
    if (c == SpectrumCase::Null) return 0.0;
    if (c != SpectrumCase::Generic) {
        throw Error(ErrorCode::CaseMismatch, "dirichlet_ratio is undefined for the " +
                                                 std::string(to_string(c)) + " case (y=" + std::to_string(y) + ")");
    }
    const label_t py = detail::mul_mod(spec.p, y, spec.n);
    const label_t mpy = detail::mul_mod(spec.m, py, spec.n);
    const double num = detail::sin_pi_residue(mpy, spec.n);
    const double den = detail::sin_pi_residue(py, spec.n);
    return (num * num) / (den * den);
}

/// tan^2(theta) sin^2(2k theta): the Amplified-QFT probability of a Resonant y.
inline double amplified_resonant_factor(const GroverSchedule &g) {
    const double t = std::tan(g.theta);
    const double s = std::sin(static_cast<double>(2 * g.k) * g.theta);
    return t * t * s * s;
}

inline double amplified_pr(label_t y, const OracleSpec &spec, const GroverSchedule &schedule) {
    switch (classify(y, spec)) {
        case SpectrumCase::Zero: {
            const double c = std::cos(static_cast<double>(2 * schedule.k) * schedule.theta);
            return clamp_probability(c * c);
        }
        case SpectrumCase::Resonant: return clamp_probability(amplified_resonant_factor(schedule));
        case SpectrumCase::Generic: {
            const double m = static_cast<double>(spec.m);
            return clamp_probability(amplified_resonant_factor(schedule) * dirichlet_ratio(y, spec) / (m * m));
        }
        case SpectrumCase::Null: return 0.0;
    }
    return 0.0;
}

inline double qft_pr(label_t y, const OracleSpec &spec) {
    const double n = static_cast<double>(spec.n), m = static_cast<double>(spec.m);
    switch (classify(y, spec)) {
        case SpectrumCase::Zero: {
            const double f = 1.0 - 2.0 * m / n;
            return clamp_probability(f * f);
        }
        case SpectrumCase::Resonant: return 4.0 * m * m / (n * n);
        case SpectrumCase::Generic: return clamp_probability(4.0 / (n * n) * dirichlet_ratio(y, spec));
        case SpectrumCase::Null: return 0.0;
    }
    return 0.0;
}

inline double qhs_pr(label_t y, const OracleSpec &spec) {
    const double n = static_cast<double>(spec.n), m = static_cast<double>(spec.m);
    switch (classify(y, spec)) {
        case SpectrumCase::Zero: return clamp_probability(1.0 - 2.0 * m * (n - m) / (n * n));
        case SpectrumCase::Resonant: return 2.0 * m * m / (n * n);
        case SpectrumCase::Generic: return clamp_probability(2.0 / (n * n) * dirichlet_ratio(y, spec));
        case SpectrumCase::Null: return 0.0;
    }
    return 0.0;
}

inline double closed_form_pr(Algorithm alg, label_t y, const OracleSpec &spec, const GroverSchedule &schedule) {
    switch (alg) {
        case Algorithm::Amplified: return amplified_pr(y, spec, schedule);
        case Algorithm::Qft: return qft_pr(y, spec);
        case Algorithm::Qhs: return qhs_pr(y, spec);
    }
    return 0.0;
}

/// Whole closed-form table. Sines are tabulated once per N; values are
/// bit-identical to the per-y functions above.
inline ProbabilityTable closed_form_table(Algorithm alg, const OracleSpec &spec,
                                          std::optional<std::int64_t> k_override = std::nullopt) {
    const label_t n = spec.n;
    std::vector<double> sines(static_cast<std::size_t>(n / 2 + 1));
    for (label_t j = 0; j <= n / 2; ++j) sines[static_cast<std::size_t>(j)] = detail::sin_pi_residue(j, n);
    auto sine = [&](label_t j) { return sines[static_cast<std::size_t>(std::min(j, n - j))]; };

    const double nd = static_cast<double>(n), md = static_cast<double>(spec.m);
    double zero_pr = 0.0, resonant_pr = 0.0, generic_scale = 0.0;
    switch (alg) {
        case Algorithm::Amplified: {
            const auto g = grover_schedule(n, spec.m, k_override);
            const double c = std::cos(static_cast<double>(2 * g.k) * g.theta);
            zero_pr = c * c;
            resonant_pr = amplified_resonant_factor(g);
            generic_scale = resonant_pr / (md * md);
            break;
        }
        case Algorithm::Qft: {
            const double f = 1.0 - 2.0 * md / nd;
            zero_pr = f * f;
            resonant_pr = 4.0 * md * md / (nd * nd);
            generic_scale = 4.0 / (nd * nd);
            break;
        }
        case Algorithm::Qhs:
            zero_pr = 1.0 - 2.0 * md * (nd - md) / (nd * nd);
            resonant_pr = 2.0 * md * md / (nd * nd);
            generic_scale = 2.0 / (nd * nd);
            break;
    }

    ProbabilityTable table;
    table.n = n;
    table.algorithm = alg;
    table.entries.resize(static_cast<std::size_t>(n));
    const label_t p_mod = spec.p % n, m_mod = spec.m % n;
    label_t py = 0;
    for (label_t y = 0; y < n; ++y) {
        auto &e = table.entries[static_cast<std::size_t>(y)];
        e.y = y;
        e.source = Source::ClosedForm;
        const label_t mpy = m_mod * py % n;
        if (y == 0) {
            e.spectrum_case = SpectrumCase::Zero;
            e.pr = clamp_probability(zero_pr);
        } else if (py == 0) {
            e.spectrum_case = SpectrumCase::Resonant;
            e.pr = clamp_probability(resonant_pr);
        } else if (mpy == 0) {
            e.spectrum_case = SpectrumCase::Null;
            e.pr = 0.0;
        } else {
            e.spectrum_case = SpectrumCase::Generic;
            const double num = sine(mpy), den = sine(py);
            const double r = (num * num) / (den * den);
            // Same association order as amplified_pr / qft_pr / qhs_pr.
            e.pr = alg == Algorithm::Amplified ? clamp_probability(resonant_pr * r / (md * md))
                                               : clamp_probability(generic_scale * r);
        }
        py += p_mod;
        if (py >= n) py -= n;
    }
    return table;
}

enum class Baseline { Qft, Qhs };

/// Sandwich for PrRatio(y) = Pr_amplified(y) / Pr_baseline(y).
struct RatioBounds {
    double lower = 0.0;
    double upper = 0.0;
    double approx = 0.0;  ///< N/4M against QFT, N/2M against QHS

    [[nodiscard]] double gap() const { return upper - lower; }
    [[nodiscard]] bool contains(double value, double rel_tol = 1e-9) const {
        const double slack = rel_tol * std::max(1.0, upper);
        return value >= lower - slack && value <= upper + slack;
    }
};

/// upper = (N/cM)(N/(N-M)), lower = upper (1 - 2M/N)^2 with c = 4 (QFT) or 2 (QHS).
inline RatioBounds pr_ratio_bounds(const OracleSpec &spec, Baseline baseline) {
    if (2 * spec.m > spec.n) {
        throw Error(ErrorCode::MarkedSetTooLarge, "ratio bounds need 2M <= N");
    }
    const double n = static_cast<double>(spec.n), m = static_cast<double>(spec.m);
    const double c = baseline == Baseline::Qft ? 4.0 : 2.0;
    RatioBounds b;
    b.approx = n / (c * m);
    b.upper = b.approx * (n / (n - m));
    const double f = 1.0 - 2.0 * m / n;
    b.lower = b.upper * f * f;
    return b;
}

/// PrRatio(y) for a Resonant or Generic frequency.
inline double pr_ratio(label_t y, const OracleSpec &spec, Baseline baseline, const GroverSchedule &schedule) {
    const SpectrumCase c = classify(y, spec);
    if (c == SpectrumCase::Zero || c == SpectrumCase::Null) {
        throw Error(ErrorCode::CaseMismatch, "PrRatio is only defined on Resonant and Generic frequencies");
    }
    const double base = baseline == Baseline::Qft ? qft_pr(y, spec) : qhs_pr(y, spec);
    return amplified_pr(y, spec, schedule) / base;
}

}  // namespace lpq
