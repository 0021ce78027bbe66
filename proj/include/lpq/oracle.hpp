#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpq/errors.hpp"

namespace lpq {

using label_t = std::int64_t;

/// A Local Period Problem instance: the marked set is the arithmetic
/// progression A = {s + r*p : r = 0..m-1} inside the labels 0..n-1.
struct OracleSpec {
    label_t n = 0;
    label_t m = 0;
    label_t p = 0;
    label_t s = 0;

    [[nodiscard]] label_t last_member() const noexcept { return s + (m - 1) * p; }

    /// Membership by arithmetic, no oracle call involved.
    [[nodiscard]] bool contains(label_t x) const noexcept {
        if (x < s || x > last_member()) return false;
        return (x - s) % p == 0;
    }

    friend bool operator==(const OracleSpec &, const OracleSpec &) = default;
};

/// Validates (n, m, p, s). Non-strict mode only checks that A fits in L.
/// Strict mode also requires p*p <= n and 2m <= n, the regime in which every
/// ratio bound of the Amplified-QFT analysis is well defined.
inline OracleSpec build_oracle(label_t n, label_t m, label_t p, label_t s, bool strict = true) {
    if (n <= 0 || m <= 0 || p <= 0) {
        throw Error(ErrorCode::DegenerateInstance,
                    "N, M and P must be positive (got N=" + std::to_string(n) + ", M=" +
                        std::to_string(m) + ", P=" + std::to_string(p) + ")");
    }
    if (s < 0 || s > n - 1) {
        throw Error(ErrorCode::OverflowsLabelSpace,
                    "offset s=" + std::to_string(s) + " outside 0..N-1");
    }
    // (m-1)*p is compared against n-1-s to stay clear of overflow.
    if (m - 1 > 0 && p > (n - 1 - s) / (m - 1)) {
        throw Error(ErrorCode::OverflowsLabelSpace,
                    "s+(M-1)P = " + std::to_string(s + (m - 1) * p) + " > N-1 = " + std::to_string(n - 1));
    }
    if (strict) {
        if (p * p > n) {
            throw Error(ErrorCode::PeriodTooLarge,
                        "P^2 = " + std::to_string(p * p) + " > N = " + std::to_string(n));
        }
        if (2 * m > n) {
            throw Error(ErrorCode::MarkedSetTooLarge,
                        "2M = " + std::to_string(2 * m) + " > N = " + std::to_string(n));
        }
    }
    return OracleSpec{n, m, p, s};
}

/// Labels of A in ascending order.
inline std::vector<label_t> members(const OracleSpec &spec) {
    std::vector<label_t> out;
    out.reserve(static_cast<std::size_t>(spec.m));
    for (label_t r = 0; r < spec.m; ++r) out.push_back(spec.s + r * spec.p);
    return out;
}

/// The oracle f together with a tally of how many times it was consulted.
/// evaluate() is pure in its return value; the tally is atomic so a handle can
/// be shared between threads.
class OracleHandle {
  public:
    explicit OracleHandle(OracleSpec spec) : spec_(spec) {}

    OracleHandle(const OracleHandle &other)
        : spec_(other.spec_), marked_(other.marked_), queries_(other.query_count()) {}

    OracleHandle &operator=(const OracleHandle &other) {
        spec_ = other.spec_;
        marked_ = other.marked_;
        queries_.store(other.query_count());
        return *this;
    }

    /// Oracle over an arbitrary marked subset. Only meant for negative tests
    /// (aperiodic sets on which recovery has to fail cleanly). The stored spec
    /// carries n and |subset|; its p and s are placeholders.
    static OracleHandle from_subset(label_t n, std::vector<label_t> subset) {
        if (n <= 0 || subset.empty()) {
            throw Error(ErrorCode::DegenerateInstance, "subset oracle needs N > 0 and a non-empty subset");
        }
        std::vector<char> marked(static_cast<std::size_t>(n), 0);
        for (label_t x : subset) {
            if (x < 0 || x >= n) throw Error(ErrorCode::LabelOutOfRange, "subset label " + std::to_string(x));
            marked[static_cast<std::size_t>(x)] = 1;
        }
        const auto count = static_cast<label_t>(std::count(marked.begin(), marked.end(), 1));
        const label_t first = *std::min_element(subset.begin(), subset.end());
        OracleHandle handle(OracleSpec{n, count, 1, first});
        handle.marked_ = std::move(marked);
        return handle;
    }

    [[nodiscard]] const OracleSpec &spec() const noexcept { return spec_; }

    [[nodiscard]] int evaluate(label_t x) const {
        if (x < 0 || x >= spec_.n) {
            throw Error(ErrorCode::LabelOutOfRange,
                        "label " + std::to_string(x) + " outside 0.." + std::to_string(spec_.n - 1));
        }
        queries_.fetch_add(1, std::memory_order_relaxed);
        return is_marked(x) ? 1 : 0;
    }

    /// evaluate() extended to all integers: labels outside L are never in A,
    /// so they read as 0 without consulting (or charging) the oracle.
    [[nodiscard]] int probe(label_t x) const {
        if (x < 0 || x >= spec_.n) return 0;
        return evaluate(x);
    }

    [[nodiscard]] std::uint64_t query_count() const noexcept {
        return queries_.load(std::memory_order_relaxed);
    }

    /// Marks without charging a query. Simulations use this to build
    /// amplitudes; searchers go through evaluate()/probe().
    [[nodiscard]] bool is_marked(label_t x) const noexcept {
        if (!marked_.empty()) return marked_[static_cast<std::size_t>(x)] != 0;
        return spec_.contains(x);
    }

  private:
    OracleSpec spec_;
    std::vector<char> marked_;
    mutable std::atomic<std::uint64_t> queries_{0};
};

}  // namespace lpq
