#pragma once

#include <cstdint>

namespace brw {

/// splitmix64 finalizer; good avalanche, used to key sub-streams.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent 64-bit seed for the sub-task `key` of a run seeded
/// by `seed`. Used for per-environment and per-replica streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) noexcept {
    return mix64(seed + 0x9e3779b97f4a7c15ULL * (key + 0x632be59bd9b4e019ULL));
}

/// Counter-based random sub-stream: the pair (seed, key) fully determines the
/// sequence, so draws are reproducible regardless of evaluation order or
/// thread count. State is a single 64-bit word advanced splitmix-style.
class SubStream {
public:
    SubStream(std::uint64_t seed, std::uint64_t key) noexcept
        : state_(derive_seed(seed, key)) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix64(state_);
    }

    /// Uniform on [0, 1), 53 random bits.
    double next_u01() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1); safe as a log() argument.
    double next_u01_positive() noexcept {
        double u;
        do {
            u = next_u01();
        } while (u == 0.0);
        return u;
    }

    double next_normal() noexcept;
    double next_gamma(double shape) noexcept;
    double next_beta(double alpha, double beta) noexcept;

private:
    std::uint64_t state_;
};

}  // namespace brw
