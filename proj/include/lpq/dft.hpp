#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace lpq {

using cplx = std::complex<double>;

/// Forward uses omega = exp(-2*pi*i/N); Inverse conjugates the spectrum.
enum class DftSign { Forward, Inverse };

/// Which route computes the order-N transform. Direct is the O(N^2) reference
/// summation; Fast goes through FFTW and is validated against Direct in tests.
enum class DftPath { Direct, Fast };

namespace detail {

/// omega^j for j = 0..n-1. Indexing by (z*y mod n) keeps every phase argument
/// in [0, 2*pi) regardless of how large z*y gets.
inline std::vector<cplx> twiddles(std::int64_t n, DftSign sign) {
    std::vector<cplx> table(static_cast<std::size_t>(n));
    const double dir = sign == DftSign::Forward ? -1.0 : 1.0;
    for (std::int64_t j = 0; j < n; ++j) {
        const double angle = dir * 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        table[static_cast<std::size_t>(j)] = {std::cos(angle), std::sin(angle)};
    }
    return table;
}

class FftwPlanCache {
  public:
    static FftwPlanCache &instance() {
        static FftwPlanCache cache;
        return cache;
    }

    FftwPlanCache(const FftwPlanCache &) = delete;
    FftwPlanCache &operator=(const FftwPlanCache &) = delete;

    fftw_plan get(int n, DftSign sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(n, sign == DftSign::Forward ? FFTW_FORWARD : FFTW_BACKWARD);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<cplx> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex *>(in.data()),
                                          reinterpret_cast<fftw_complex *>(out.data()), key.second,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

  private:
    FftwPlanCache() = default;
    ~FftwPlanCache() {
        for (auto &[key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

}  // namespace detail

/// Unitary order-N DFT, out(y) = N^{-1/2} sum_z omega^{zy} in(z).
inline std::vector<cplx> dft(std::span<const cplx> in, DftSign sign = DftSign::Forward,
                             DftPath path = DftPath::Fast) {
    const auto n = static_cast<std::int64_t>(in.size());
    std::vector<cplx> out(in.size());
    if (n == 0) return out;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    if (path == DftPath::Direct) {
        const auto table = detail::twiddles(n, sign);
        for (std::int64_t y = 0; y < n; ++y) {
            cplx acc{0.0, 0.0};
            std::int64_t phase = 0;  // z*y mod n, advanced incrementally
            for (std::int64_t z = 0; z < n; ++z) {
                acc += table[static_cast<std::size_t>(phase)] * in[static_cast<std::size_t>(z)];
                phase += y;
                if (phase >= n) phase -= n;
            }
            out[static_cast<std::size_t>(y)] = acc * scale;
        }
        return out;
    }

    fftw_plan plan = detail::FftwPlanCache::instance().get(static_cast<int>(n), sign);
    std::vector<cplx> scratch(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex *>(scratch.data()),
                     reinterpret_cast<fftw_complex *>(out.data()));
    for (auto &v : out) v *= scale;
    return out;
}

}  // namespace lpq
