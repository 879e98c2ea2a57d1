// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hgcma {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of substream `stream` derived from `seed`. Distinct streams of the
/// same seed are decorrelated through two rounds of SplitMix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// FNV-1a over a byte string; used to hash experiment points.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Portable random source: std::mt19937_64 (whose output sequence is fixed
/// by the standard) plus distribution code written here, since the standard
/// distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

    /// Uniform integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n);

    /// Standard normal (Box-Muller, both outputs used).
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace hgcma
