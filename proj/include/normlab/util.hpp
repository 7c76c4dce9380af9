#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace normlab {

/// Raised when a formula or operation is evaluated outside the parameter
/// regime it is stated for. The message names the offending precondition.
struct RegimeError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised on malformed inputs (bad CSV, bad exponent string, shape mismatch).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer. Good 64-bit mixing, used for seed derivation.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += kGolden64;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, index). Used for per-trial
/// and per-restart streams so parallel runs are schedule-independent.
inline constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(seed ^ mix64(index + 1));
}

/// Pairwise (cascade) summation; order-independent aggregation for means.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 16) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Sample mean and standard error (sample sd / sqrt(n)).
inline MeanStderr mean_stderr(std::span<const double> x) {
    if (x.empty()) return {};
    const double n = static_cast<double>(x.size());
    const double mean = pairwise_sum(x) / n;
    if (x.size() < 2) return {mean, 0.0};
    std::vector<double> sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers (0 = hardware).
/// Chunks are contiguous, so writes to preallocated slots stay deterministic.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned workers = threads == 0 ? hw : threads;
    if (workers > n) workers = static_cast<unsigned>(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace normlab
