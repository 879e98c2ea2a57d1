// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hgcma/block.hpp"

namespace hgcma {

enum class ConstellationTag { Psk8, Qam16 };

/// Finite source alphabet with unit average power.
class Constellation {
public:
    static Constellation psk8();
    static Constellation qam16();
    /// "psk8" or "qam16" (case-insensitive). Throws Error(Config) otherwise.
    static Constellation from_name(std::string_view name);

    ConstellationTag tag() const noexcept { return tag_; }
    std::string_view name() const noexcept;
    const std::vector<cplx>& points() const noexcept { return points_; }

    /// Index of the nearest point (ties to the lower index).
    std::size_t nearest(cplx z) const noexcept;

private:
    Constellation(ConstellationTag tag, std::vector<cplx> points) : tag_(tag), points_(std::move(points)) {}

    ConstellationTag tag_;
    std::vector<cplx> points_;
};

/// y(n) = A s(n) + b(n) with circular Gaussian noise of variance
/// noise_variance per receive entry.
struct ChannelScenario {
    std::size_t sources = 0;   // M
    std::size_t receivers = 0; // N
    std::size_t samples = 0;   // K
    ComplexBlock mixing;       // N x M
    double noise_variance = 0.0;
    Constellation constellation = Constellation::psk8();
    std::uint64_t seed = 0;
};

/// Noise variance giving the requested per-receive-antenna SNR for unit-power
/// sources through unit-variance channel taps: M / 10^(snr_db/10).
double noise_variance_for_snr(std::size_t sources, double snr_db);

/// Substreams derived from a scenario seed.
enum class SeedStream : std::uint64_t { Sources = 1, Channel = 2, Noise = 3 };

ComplexBlock gen_sources(std::size_t m, std::size_t k, const Constellation& constellation, std::uint64_t seed);

/// N x M matrix of i.i.d. CN(0,1) taps. Draws are repeated until the smallest
/// singular value exceeds 1e-6 times the largest.
ComplexBlock gen_channel(std::size_t m, std::size_t n, std::uint64_t seed);

/// Channel, noise level and seed bundle; the channel is drawn from the
/// Channel substream of `seed`.
ChannelScenario make_scenario(std::size_t m, std::size_t n, std::size_t k, double snr_db,
                              const Constellation& constellation, std::uint64_t seed);

/// Y = A S + B, noise drawn from the Noise substream of scenario.seed.
ComplexBlock observe(const ChannelScenario& scenario, const ComplexBlock& sources);

/// Sum over all entries of (|z|^2 - 1)^2.
double cm_cost(const ComplexBlock& z);

/// Maximum-total-weight one-to-one assignment for a square weight matrix
/// (row-major n x n). Returns perm with row i assigned to column perm[i].
/// Ties resolve deterministically (first optimum found in column order).
std::vector<std::size_t> max_weight_assignment(std::size_t n, const std::vector<double>& weights);

struct SinrResult {
    std::vector<double> per_output;      // linear, output order
    double average = 0.0;                // linear mean of per_output
    std::vector<std::size_t> assignment; // output k recovers source assignment[k]
};

/// Output SINR of separator W (M x N) against channel A (N x M) with white
/// noise of variance noise_variance. A zero denominator gives 0 for a zero
/// numerator and +infinity otherwise.
SinrResult sinr(const ComplexBlock& w, const ComplexBlock& a, double noise_variance);

/// 10 log10(x); +infinity stays +infinity, 0 maps to -infinity.
double to_db(double linear);

struct AmbiguityMap {
    std::vector<std::size_t> permutation; // output row k estimates source permutation[k]
    std::vector<cplx> scales;             // applied to output row k
};

/// Matches rows of Z to rows of S by maximal total normalized |correlation|
/// and rescales each matched row by the least-squares factor <s,z>/<z,z>.
/// The returned block has row m aligned with source row m.
std::pair<AmbiguityMap, ComplexBlock> resolve_ambiguity(const ComplexBlock& z, const ComplexBlock& s);

/// Fraction of entries whose nearest-point decision differs from the truth.
double ser(const ComplexBlock& aligned, const ComplexBlock& s, const Constellation& constellation);

}  // namespace hgcma
