#pragma once

// Reference computations shared by the unit tests and the acceptance runner.
// Nothing here calls into the closed-form module.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "lpq/oracle.hpp"
#include "lpq/random.hpp"
#include "lpq/simulator.hpp"
#include "lpq/spectrum.hpp"

namespace lpq::support {

/// Calls fn(spec) for every strict spec with n_min <= N <= n_max.
template <class Fn>
void for_each_strict_spec(label_t n_min, label_t n_max, Fn &&fn) {
    for (label_t n = std::max<label_t>(n_min, 2); n <= n_max; ++n) {
        for (label_t p = 1; p * p <= n; ++p) {
            for (label_t m = 1; 2 * m <= n && (m - 1) * p <= n - 1; ++m) {
                for (label_t s = 0; s + (m - 1) * p <= n - 1; ++s) fn(OracleSpec{n, m, p, s});
            }
        }
    }
}

/// Pr(y) by summing the transform of the prepared state term by term in long
/// double. amp_marked / amp_unmarked are the prepared amplitudes on and off A.
inline std::vector<double> direct_sum_pr(const OracleSpec &spec, long double amp_marked,
                                         long double amp_unmarked) {
    const auto n = static_cast<long double>(spec.n);
    std::vector<double> out(static_cast<std::size_t>(spec.n));
    for (label_t y = 0; y < spec.n; ++y) {
        std::complex<long double> acc{0.0L, 0.0L};
        for (label_t z = 0; z < spec.n; ++z) {
            const long double phase = -2.0L * std::numbers::pi_v<long double> *
                                      static_cast<long double>((z * y) % spec.n) / n;
            const long double a = spec.contains(z) ? amp_marked : amp_unmarked;
            acc += a * std::complex<long double>(std::cos(phase), std::sin(phase));
        }
        out[static_cast<std::size_t>(y)] = static_cast<double>(std::norm(acc) / n);
    }
    return out;
}

/// Amplitudes after k Grover steps from the two-dimensional recursion on
/// (marked, unmarked) amplitudes, independent of the rotation-angle formula.
inline std::pair<long double, long double> grover_pair(label_t n, label_t m, std::int64_t k) {
    const auto nd = static_cast<long double>(n), md = static_cast<long double>(m);
    long double a = 1.0L / std::sqrt(nd), b = a;
    for (std::int64_t i = 0; i < k; ++i) {
        const long double mean = (-a * md + b * (nd - md)) / nd;
        a = 2.0L * mean + a;
        b = 2.0L * mean - b;
    }
    return {a, b};
}

/// Reference distributions for the three algorithms.
inline std::vector<double> reference_amplified(const OracleSpec &spec, std::int64_t k) {
    const auto [a, b] = grover_pair(spec.n, spec.m, k);
    return direct_sum_pr(spec, a, b);
}

inline std::vector<double> reference_qft(const OracleSpec &spec) {
    const long double amp = 1.0L / std::sqrt(static_cast<long double>(spec.n));
    return direct_sum_pr(spec, -amp, amp);
}

inline std::vector<double> reference_qhs(const OracleSpec &spec) {
    const long double amp = 1.0L / std::sqrt(static_cast<long double>(spec.n));
    const auto on = direct_sum_pr(spec, amp, 0.0L);
    const auto off = direct_sum_pr(spec, 0.0L, amp);
    std::vector<double> out(on.size());
    for (std::size_t y = 0; y < out.size(); ++y) out[y] = on[y] + off[y];
    return out;
}

/// Random unitary whose row y0 sums to zero. Row y0 is a random vector with
/// its component along the uniform vector removed; the remaining rows are
/// completed by Gram-Schmidt on random vectors.
inline DenseMatrix deflated_unitary(label_t n, label_t y0, Rng &rng) {
    using vec = std::vector<cplx>;
    auto random_vec = [&] {
        vec v(static_cast<std::size_t>(n));
        for (auto &c : v) c = {rng.uniform() - 0.5, rng.uniform() - 0.5};
        return v;
    };
    auto dot = [](const vec &u, const vec &v) {  // <u, v> = sum u conj(v)
        cplx acc{0.0, 0.0};
        for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * std::conj(v[i]);
        return acc;
    };
    auto normalize = [&](vec &v) {
        const double len = std::sqrt(std::real(dot(v, v)));
        for (auto &c : v) c /= len;
    };

    // The first row is deflated against the uniform vector, every later one
    // against the rows already accepted.
    const std::vector<vec> uniform = {vec(static_cast<std::size_t>(n), cplx{1.0 / std::sqrt(static_cast<double>(n)), 0.0})};
    std::vector<vec> rows;
    while (static_cast<label_t>(rows.size()) < n) {
        vec v = random_vec();
        const auto &against = rows.empty() ? uniform : rows;
        for (int pass = 0; pass < 2; ++pass) {  // second pass for stability
            for (const auto &u : against) {
                const cplx c = dot(v, u);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
            }
        }
        normalize(v);
        rows.push_back(std::move(v));
    }

    DenseMatrix u;
    u.n = n;
    u.entries.resize(static_cast<std::size_t>(n * n));
    // rows[0] is the deflated row; put it at y0 and the others in order.
    label_t next = 1;
    for (label_t r = 0; r < n; ++r) {
        const vec &row = r == y0 ? rows[0] : rows[static_cast<std::size_t>(next++)];
        for (label_t c = 0; c < n; ++c) u.at(r, c) = row[static_cast<std::size_t>(c)];
    }
    return u;
}

}  // namespace lpq::support
