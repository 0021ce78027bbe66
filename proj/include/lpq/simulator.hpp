#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lpq/dft.hpp"
#include "lpq/errors.hpp"
#include "lpq/oracle.hpp"
#include "lpq/random.hpp"
#include "lpq/spectrum.hpp"

namespace lpq {

/// Length-N amplitude vector over the labels of Z_N.
struct StateVector {
    std::vector<cplx> amplitudes;

    [[nodiscard]] label_t size() const noexcept { return static_cast<label_t>(amplitudes.size()); }
    [[nodiscard]] const cplx &operator[](label_t z) const { return amplitudes[static_cast<std::size_t>(z)]; }
    [[nodiscard]] cplx &operator[](label_t z) { return amplitudes[static_cast<std::size_t>(z)]; }

    [[nodiscard]] double norm() const {
        double acc = 0.0;
        for (const auto &a : amplitudes) acc += std::norm(a);
        return std::sqrt(acc);
    }
};

/// Amplification geometry for M marked labels out of N: sin(theta) = sqrt(M/N),
/// k iterations, and the resulting amplitude a_k on each marked label and b_k
/// on each unmarked one.
struct GroverSchedule {
    double theta = 0.0;
    std::int64_t k = 0;
    double a_k = 0.0;
    double b_k = 0.0;
    label_t n = 0;
    label_t m = 0;

    /// Total probability on the marked set, sin^2((2k+1)theta).
    [[nodiscard]] double good_probability() const {
        const double s = std::sin(static_cast<double>(2 * k + 1) * theta);
        return s * s;
    }
};

/// Default desk-scale ceiling on N for full-spectrum work; LPQ_SOFT_N_LIMIT
/// overrides it. Exceeding it only warns.
inline constexpr label_t kDefaultSoftNLimit = label_t{1} << 16;

inline label_t soft_n_limit() {
    if (const char *env = std::getenv("LPQ_SOFT_N_LIMIT")) {
        try {
            return std::stoll(env);
        } catch (const std::exception &) {
            std::cerr << "warning: ignoring unparsable LPQ_SOFT_N_LIMIT='" << env << "'\n";
        }
    }
    return kDefaultSoftNLimit;
}

inline void warn_if_above_soft_limit(label_t n) {
    if (const label_t limit = soft_n_limit(); n > limit) {
        std::cerr << "warning: N=" << n << " exceeds the soft limit " << limit
                  << " for full-spectrum operations\n";
    }
}

inline StateVector uniform_state(label_t n) {
    if (n < 1) throw Error(ErrorCode::DegenerateInstance, "uniform_state needs N >= 1");
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    return StateVector{std::vector<cplx>(static_cast<std::size_t>(n), cplx{amp, 0.0})};
}

/// theta = arcsin(sqrt(M/N)), k = floor(pi / (4 theta)) unless overridden.
inline GroverSchedule grover_schedule(label_t n, label_t m, std::optional<std::int64_t> k_override = std::nullopt) {
    if (m <= 0 || n <= 0) throw Error(ErrorCode::DegenerateInstance, "grover_schedule needs M >= 1");
    if (m > n) throw Error(ErrorCode::InvalidArgument, "grover_schedule needs M <= N");
    if (k_override && *k_override < 0) throw Error(ErrorCode::InvalidArgument, "iteration count must be >= 0");

    GroverSchedule g;
    g.n = n;
    g.m = m;
    // The ratios with an exactly representable angle are pinned so the floor
    // below never lands on the wrong side of an integer (2M = N gives exactly
    // pi/(4 theta) = 1).
    if (m == n) {
        g.theta = std::numbers::pi / 2;
    } else if (2 * m == n) {
        g.theta = std::numbers::pi / 4;
    } else if (4 * m == n) {
        g.theta = std::numbers::pi / 6;
    } else {
        g.theta = std::asin(std::sqrt(static_cast<double>(m) / static_cast<double>(n)));
    }
    g.k = k_override ? *k_override : static_cast<std::int64_t>(std::floor(std::numbers::pi / (4.0 * g.theta)));

    const double angle = static_cast<double>(2 * g.k + 1) * g.theta;
    g.a_k = std::sin(angle) / std::sqrt(static_cast<double>(m));
    g.b_k = m == n ? 0.0 : std::cos(angle) / std::sqrt(static_cast<double>(n - m));
    return g;
}

/// Marks of A as a byte mask over 0..N-1.
inline std::vector<char> marked_mask(const OracleSpec &spec) {
    std::vector<char> mask(static_cast<std::size_t>(spec.n), 0);
    for (label_t r = 0; r < spec.m; ++r) mask[static_cast<std::size_t>(spec.s + r * spec.p)] = 1;
    return mask;
}

/// One Grover step: sign flip on the marked labels, then inversion about the
/// mean of all amplitudes.
inline StateVector grover_iterate(StateVector state, std::span<const char> marked) {
    cplx mean{0.0, 0.0};
    for (std::size_t z = 0; z < state.amplitudes.size(); ++z) {
        if (marked[z]) state.amplitudes[z] = -state.amplitudes[z];
        mean += state.amplitudes[z];
    }
    mean /= static_cast<double>(state.amplitudes.size());
    for (auto &a : state.amplitudes) a = 2.0 * mean - a;
    return state;
}

inline StateVector grover_iterate(StateVector state, const OracleSpec &spec) {
    const auto mask = marked_mask(spec);
    return grover_iterate(std::move(state), mask);
}

inline StateVector dft(const StateVector &state, DftSign sign = DftSign::Forward, DftPath path = DftPath::Fast) {
    return StateVector{dft(std::span<const cplx>(state.amplitudes), sign, path)};
}

/// Uniform superposition after k Grover iterations, before any transform.
inline StateVector amplified_state(const OracleSpec &spec, std::optional<std::int64_t> k_override = std::nullopt) {
    const auto schedule = grover_schedule(spec.n, spec.m, k_override);
    const auto mask = marked_mask(spec);
    StateVector state = uniform_state(spec.n);
    for (std::int64_t i = 0; i < schedule.k; ++i) state = grover_iterate(std::move(state), mask);
    return state;
}

/// Phase-kickback state N^{-1/2}[(-2) sum_{z in A}|z> + sum_z |z>], i.e.
/// (-1)^{f(z)} on the uniform superposition with the ancilla dropped.
inline StateVector phase_oracle_state(const OracleSpec &spec) {
    StateVector state = uniform_state(spec.n);
    for (label_t r = 0; r < spec.m; ++r) state[spec.s + r * spec.p] *= -1.0;
    return state;
}

inline StateVector amplified_qft_state(const OracleSpec &spec, std::optional<std::int64_t> k_override = std::nullopt,
                                       DftPath path = DftPath::Fast) {
    warn_if_above_soft_limit(spec.n);
    return dft(amplified_state(spec, k_override), DftSign::Forward, path);
}

inline StateVector qft_state(const OracleSpec &spec, DftPath path = DftPath::Fast) {
    warn_if_above_soft_limit(spec.n);
    return dft(phase_oracle_state(spec), DftSign::Forward, path);
}

/// Two-register QHS state after the transform on the first register:
/// gamma[b][y] is the amplitude of |y>|b> for oracle bit b.
struct QhsState {
    StateVector unmarked;  // b = 0
    StateVector marked;    // b = 1

    [[nodiscard]] double norm() const {
        const double u = unmarked.norm(), m = marked.norm();
        return std::sqrt(u * u + m * m);
    }
};

inline QhsState qhs_state(const OracleSpec &spec, DftPath path = DftPath::Fast) {
    warn_if_above_soft_limit(spec.n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(spec.n));
    StateVector zero{std::vector<cplx>(static_cast<std::size_t>(spec.n), cplx{amp, 0.0})};
    StateVector one{std::vector<cplx>(static_cast<std::size_t>(spec.n), cplx{0.0, 0.0})};
    for (label_t r = 0; r < spec.m; ++r) {
        const label_t x = spec.s + r * spec.p;
        zero[x] = 0.0;
        one[x] = amp;
    }
    return QhsState{dft(zero, DftSign::Forward, path), dft(one, DftSign::Forward, path)};
}

/// |amplitude|^2 per label, clamped near zero.
inline std::vector<double> probabilities(const StateVector &state) {
    std::vector<double> out(state.amplitudes.size());
    std::transform(state.amplitudes.begin(), state.amplitudes.end(), out.begin(),
                   [](const cplx &a) { return clamp_probability(std::norm(a)); });
    return out;
}

inline ProbabilityTable make_table(const OracleSpec &spec, Algorithm alg, const std::vector<double> &pr, Source source) {
    ProbabilityTable table;
    table.n = spec.n;
    table.algorithm = alg;
    table.entries.reserve(pr.size());
    for (label_t y = 0; y < spec.n; ++y) {
        table.entries.push_back(TableEntry{y, pr[static_cast<std::size_t>(y)], classify(y, spec), source});
    }
    return table;
}

/// Pr(y) = (|sum_{x in A} omega^{xy}|^2 + |sum_{x not in A} omega^{xy}|^2) / N^2.
inline ProbabilityTable qhs_distribution(const OracleSpec &spec, DftPath path = DftPath::Fast) {
    const QhsState state = qhs_state(spec, path);
    std::vector<double> pr(static_cast<std::size_t>(spec.n));
    for (label_t y = 0; y < spec.n; ++y) {
        pr[static_cast<std::size_t>(y)] = clamp_probability(std::norm(state.unmarked[y]) + std::norm(state.marked[y]));
    }
    return make_table(spec, Algorithm::Qhs, pr, Source::Simulated);
}

/// Brute-force distribution of any of the three algorithms.
inline ProbabilityTable simulated_table(Algorithm alg, const OracleSpec &spec,
                                        std::optional<std::int64_t> k_override = std::nullopt,
                                        DftPath path = DftPath::Fast) {
    switch (alg) {
        case Algorithm::Amplified:
            return make_table(spec, alg, probabilities(amplified_qft_state(spec, k_override, path)), Source::Simulated);
        case Algorithm::Qft:
            return make_table(spec, alg, probabilities(qft_state(spec, path)), Source::Simulated);
        case Algorithm::Qhs:
            return qhs_distribution(spec, path);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown algorithm");
}

/// A linear map on C^N given as a callable; general_unitary_state checks
/// that it preserves norms before using it.
using LinearMap = std::function<std::vector<cplx>(std::span<const cplx>)>;

/// Dense N x N matrix, row-major: out(y) = sum_z entry(y, z) in(z).
struct DenseMatrix {
    label_t n = 0;
    std::vector<cplx> entries;

    [[nodiscard]] cplx &at(label_t row, label_t col) { return entries[static_cast<std::size_t>(row * n + col)]; }
    [[nodiscard]] const cplx &at(label_t row, label_t col) const {
        return entries[static_cast<std::size_t>(row * n + col)];
    }

    [[nodiscard]] std::vector<cplx> apply(std::span<const cplx> in) const {
        std::vector<cplx> out(static_cast<std::size_t>(n));
        for (label_t y = 0; y < n; ++y) {
            cplx acc{0.0, 0.0};
            for (label_t z = 0; z < n; ++z) acc += at(y, z) * in[static_cast<std::size_t>(z)];
            out[static_cast<std::size_t>(y)] = acc;
        }
        return out;
    }

    [[nodiscard]] LinearMap as_map() const {
        return [m = *this](std::span<const cplx> in) { return m.apply(in); };
    }
};

/// Spot-checks that `unitary` preserves the norm of a few random vectors.
inline void require_unitary(const LinearMap &unitary, label_t n, double tol = 1e-8) {
    Rng rng(0x5eedu + static_cast<std::uint64_t>(n));
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<cplx> v(static_cast<std::size_t>(n));
        double norm2 = 0.0;
        for (auto &c : v) {
            c = {rng.uniform() - 0.5, rng.uniform() - 0.5};
            norm2 += std::norm(c);
        }
        for (auto &c : v) c /= std::sqrt(norm2);
        const auto out = unitary(v);
        if (static_cast<label_t>(out.size()) != n) {
            throw Error(ErrorCode::NotUnitary, "map returned a vector of the wrong length");
        }
        double out2 = 0.0;
        for (const auto &c : out) out2 += std::norm(c);
        if (std::abs(std::sqrt(out2) - 1.0) > tol) {
            throw Error(ErrorCode::NotUnitary, "norm changed by " + std::to_string(std::abs(std::sqrt(out2) - 1.0)));
        }
    }
}

/// The QFT or Amplified-QFT pipeline with the final transform replaced by `unitary`.
inline StateVector general_unitary_state(const OracleSpec &spec, const LinearMap &unitary, bool amplified,
                                         std::optional<std::int64_t> k_override = std::nullopt) {
    require_unitary(unitary, spec.n);
    const StateVector prepared = amplified ? amplified_state(spec, k_override) : phase_oracle_state(spec);
    return StateVector{unitary(prepared.amplitudes)};
}

/// Draws one label with probability pr(y). Deterministic for a fixed seed.
inline label_t sample(const ProbabilityTable &table, std::uint64_t seed) {
    Rng rng(seed);
    const double total = table.total();
    const double u = rng.uniform() * total;
    double acc = 0.0;
    for (const auto &e : table.entries) {
        acc += e.pr;
        if (u < acc) return e.y;
    }
    // Rounding can leave u just above the running sum; fall back to the last
    // label with positive mass.
    for (auto it = table.entries.rbegin(); it != table.entries.rend(); ++it) {
        if (it->pr > 0.0) return it->y;
    }
    return 0;
}

/// Cumulative distribution for repeated draws from one table.
class Sampler {
  public:
    explicit Sampler(const ProbabilityTable &table) {
        cdf_.reserve(table.entries.size());
        double acc = 0.0;
        for (const auto &e : table.entries) {
            acc += e.pr;
            cdf_.push_back(acc);
        }
    }

    explicit Sampler(std::span<const double> pr) {
        cdf_.reserve(pr.size());
        double acc = 0.0;
        for (double p : pr) {
            acc += p;
            cdf_.push_back(acc);
        }
    }

    label_t draw(Rng &rng) const {
        const double u = rng.uniform() * cdf_.back();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) --it;
        // Skip zero-mass labels that share the boundary value.
        auto idx = static_cast<label_t>(it - cdf_.begin());
        while (idx > 0 && cdf_[static_cast<std::size_t>(idx)] == cdf_[static_cast<std::size_t>(idx - 1)]) --idx;
        return idx;
    }

  private:
    std::vector<double> cdf_;
};

}  // namespace lpq
