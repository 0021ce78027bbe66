#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string_view>
#include <vector>

#include "lpq/errors.hpp"
#include "lpq/oracle.hpp"

namespace lpq {

enum class Algorithm { Amplified, Qft, Qhs };

constexpr std::string_view to_string(Algorithm alg) noexcept {
    switch (alg) {
        case Algorithm::Amplified: return "amplified";
        case Algorithm::Qft: return "qft";
        case Algorithm::Qhs: return "qhs";
    }
    return "unknown";
}

inline Algorithm parse_algorithm(std::string_view name) {
    if (name == "amplified") return Algorithm::Amplified;
    if (name == "qft") return Algorithm::Qft;
    if (name == "qhs") return Algorithm::Qhs;
    throw Error(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) + "'");
}

/// Partition of the frequencies 0..N-1 that selects the row of each
/// probability table.
enum class SpectrumCase {
    Zero,      ///< y = 0
    Resonant,  ///< P*y = 0 mod N, y != 0
    Generic,   ///< P*y != 0 and M*P*y != 0 mod N
    Null,      ///< P*y != 0 but M*P*y = 0 mod N; probability exactly 0
};

constexpr std::string_view to_string(SpectrumCase c) noexcept {
    switch (c) {
        case SpectrumCase::Zero: return "zero";
        case SpectrumCase::Resonant: return "resonant";
        case SpectrumCase::Generic: return "generic";
        case SpectrumCase::Null: return "null";
    }
    return "unknown";
}

inline SpectrumCase classify(label_t y, const OracleSpec &spec) {
    if (y < 0 || y >= spec.n) {
        throw Error(ErrorCode::LabelOutOfRange, "frequency " + std::to_string(y) + " outside 0..N-1");
    }
    if (y == 0) return SpectrumCase::Zero;
    const label_t py = (spec.p % spec.n) * y % spec.n;
    if (py == 0) return SpectrumCase::Resonant;
    const label_t mpy = (spec.m % spec.n) * py % spec.n;
    return mpy == 0 ? SpectrumCase::Null : SpectrumCase::Generic;
}

enum class Source { ClosedForm, Simulated };

constexpr std::string_view to_string(Source s) noexcept {
    return s == Source::ClosedForm ? "closed-form" : "simulated";
}

struct TableEntry {
    label_t y = 0;
    double pr = 0.0;
    SpectrumCase spectrum_case = SpectrumCase::Zero;
    Source source = Source::ClosedForm;
};

/// Measurement distribution over the frequencies 0..N-1 for one algorithm.
struct ProbabilityTable {
    label_t n = 0;
    Algorithm algorithm = Algorithm::Amplified;
    std::vector<TableEntry> entries;

    [[nodiscard]] double total() const {
        return std::accumulate(entries.begin(), entries.end(), 0.0,
                               [](double acc, const TableEntry &e) { return acc + e.pr; });
    }

    [[nodiscard]] double pr(label_t y) const { return entries.at(static_cast<std::size_t>(y)).pr; }
};

/// Values within this distance of zero are reported as exactly zero so the
/// Null rows compare exactly.
inline constexpr double kProbabilityClamp = 1e-12;

inline double clamp_probability(double pr) noexcept { return std::abs(pr) < kProbabilityClamp ? 0.0 : pr; }

}  // namespace lpq
