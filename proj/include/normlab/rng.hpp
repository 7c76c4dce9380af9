#pragma once

#include <cstdint>

#include "normlab/special.hpp"
#include "normlab/util.hpp"

namespace normlab {

/// Counter-based 64-bit generator (SplitMix64). Streams for parallel work
/// are derived with derive_stream(seed, index), so results are independent
/// of scheduling. Identical seed + identical call sequence gives an
/// identical stream.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += kGolden64;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0,1); never returns 0 or 1, so it is
    /// safe under log() and inverse CDFs.
    double next_unit_open() noexcept {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard Gaussian via the inverse CDF (not Box-Muller), so that one
    /// uniform maps monotonically to one Gaussian.
    double next_gaussian() { return normal_quantile(next_unit_open()); }

    /// +1 or -1 with equal probability.
    double next_sign() noexcept { return (next_u64() >> 63) ? -1.0 : 1.0; }

    /// Uniform integer in [0, n).
    std::size_t next_below(std::size_t n) noexcept {
        return static_cast<std::size_t>(next_u64() % n);
    }

  private:
    std::uint64_t state_;
};

}  // namespace normlab
