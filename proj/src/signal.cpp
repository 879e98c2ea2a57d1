// SPDX-License-Identifier: Apache-2.0
#include "hgcma/signal.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include "hgcma/error.hpp"
#include "hgcma/linalg.hpp"
#include "hgcma/rng.hpp"

namespace hgcma {

Constellation Constellation::psk8() {
    std::vector<cplx> pts;
    for (int k = 0; k < 8; ++k) pts.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 8.0));
    // Exact values on the axes so |s| = 1 holds without rounding residue there.
    pts[0] = {1.0, 0.0};
    pts[2] = {0.0, 1.0};
    pts[4] = {-1.0, 0.0};
    pts[6] = {0.0, -1.0};
    return Constellation(ConstellationTag::Psk8, std::move(pts));
}

Constellation Constellation::qam16() {
    std::vector<cplx> pts;
    const double scale = 1.0 / std::sqrt(10.0);
    for (int i : {-3, -1, 1, 3})
        for (int q : {-3, -1, 1, 3}) pts.emplace_back(i * scale, q * scale);
    return Constellation(ConstellationTag::Qam16, std::move(pts));
}

Constellation Constellation::from_name(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "psk8" || lower == "8psk") return psk8();
    if (lower == "qam16" || lower == "16qam") return qam16();
    throw Error(ErrorCode::Config, "unknown constellation '" + std::string(name) + "'");
}

std::string_view Constellation::name() const noexcept {
    return tag_ == ConstellationTag::Psk8 ? "psk8" : "qam16";
}

std::size_t Constellation::nearest(cplx z) const noexcept {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double d = std::norm(z - points_[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

double noise_variance_for_snr(std::size_t sources, double snr_db) {
    return static_cast<double>(sources) / std::pow(10.0, snr_db / 10.0);
}

ComplexBlock gen_sources(std::size_t m, std::size_t k, const Constellation& constellation, std::uint64_t seed) {
    if (m == 0 || k == 0) throw Error(ErrorCode::InvalidInput, "gen_sources: empty dimensions");
    Rng rng(seed);
    ComplexBlock s(m, k);
    const auto& pts = constellation.points();
    for (cplx& z : s.data()) z = pts[rng.below(pts.size())];
    return s;
}

namespace {

double condition_ratio(const ComplexBlock& a) {
    const ComplexBlock gram = a.adjoint() * a;
    const auto eig = eig_hermitian(gram.rows(), {gram.data().begin(), gram.data().end()});
    const double lo = std::max(eig.values.front(), 0.0);
    const double hi = eig.values.back();
    return hi > 0.0 ? std::sqrt(lo / hi) : 0.0;
}

}  // namespace

ComplexBlock gen_channel(std::size_t m, std::size_t n, std::uint64_t seed) {
    if (m == 0 || n < m) throw Error(ErrorCode::InvalidInput, "gen_channel: requires N >= M >= 1");
    Rng rng(seed);
    const double sd = std::sqrt(0.5);
    for (;;) {
        ComplexBlock a(n, m);
        for (cplx& z : a.data()) {
            const double re = rng.normal();
            const double im = rng.normal();
            z = {sd * re, sd * im};
        }
        if (condition_ratio(a) > 1e-6) return a;
    }
}

ChannelScenario make_scenario(std::size_t m, std::size_t n, std::size_t k, double snr_db,
                              const Constellation& constellation, std::uint64_t seed) {
    ChannelScenario sc;
    sc.sources = m;
    sc.receivers = n;
    sc.samples = k;
    sc.mixing = gen_channel(m, n, derive_seed(seed, static_cast<std::uint64_t>(SeedStream::Channel)));
    sc.noise_variance = noise_variance_for_snr(m, snr_db);
    sc.constellation = constellation;
    sc.seed = seed;
    return sc;
}

ComplexBlock observe(const ChannelScenario& scenario, const ComplexBlock& sources) {
    if (sources.rows() != scenario.mixing.cols())
        throw Error(ErrorCode::DimensionMismatch, "observe: source rows do not match channel columns");
    if (scenario.noise_variance < 0.0) throw Error(ErrorCode::InvalidInput, "observe: negative noise variance");
    ComplexBlock y = scenario.mixing * sources;
    if (scenario.noise_variance > 0.0) {
        Rng rng(derive_seed(scenario.seed, static_cast<std::uint64_t>(SeedStream::Noise)));
        const double sd = std::sqrt(0.5 * scenario.noise_variance);
        for (cplx& z : y.data()) {
            const double re = rng.normal();
            const double im = rng.normal();
            z += cplx{sd * re, sd * im};
        }
    }
    return y;
}

double cm_cost(const ComplexBlock& z) {
    double j = 0.0;
    for (const cplx& v : z.data()) {
        const double d = std::norm(v) - 1.0;
        j += d * d;
    }
    return j;
}

std::vector<std::size_t> max_weight_assignment(std::size_t n, const std::vector<double>& weights) {
    if (weights.size() != n * n) throw Error(ErrorCode::DimensionMismatch, "assignment: weight matrix is not n x n");
    if (n == 0) return {};

    if (n > 20) {
        // Greedy fallback for large n; the subset recursion below is exponential.
        std::vector<std::size_t> perm(n, n);
        std::vector<bool> row_used(n, false), col_used(n, false);
        for (std::size_t step = 0; step < n; ++step) {
            double best = -std::numeric_limits<double>::infinity();
            std::size_t bi = 0, bj = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (row_used[i]) continue;
                for (std::size_t j = 0; j < n; ++j)
                    if (!col_used[j] && weights[i * n + j] > best) {
                        best = weights[i * n + j];
                        bi = i;
                        bj = j;
                    }
            }
            perm[bi] = bj;
            row_used[bi] = col_used[bj] = true;
        }
        return perm;
    }

    // best[mask]: best total for rows 0..popcount(mask)-1 using columns in mask.
    const std::size_t full = std::size_t{1} << n;
    std::vector<double> best(full, -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> choice(full, 0);
    best[0] = 0.0;
    for (std::size_t mask = 0; mask < full; ++mask) {
        if (best[mask] == -std::numeric_limits<double>::infinity()) continue;
        const std::size_t row = static_cast<std::size_t>(std::popcount(mask));
        if (row >= n) continue;
        for (std::size_t col = 0; col < n; ++col) {
            if (mask & (std::size_t{1} << col)) continue;
            const std::size_t next = mask | (std::size_t{1} << col);
            const double v = best[mask] + weights[row * n + col];
            if (v > best[next]) {
                best[next] = v;
                choice[next] = col;
            }
        }
    }
    std::vector<std::size_t> perm(n);
    std::size_t mask = full - 1;
    for (std::size_t row = n; row-- > 0;) {
        perm[row] = choice[mask];
        mask &= ~(std::size_t{1} << choice[mask]);
    }
    return perm;
}

SinrResult sinr(const ComplexBlock& w, const ComplexBlock& a, double noise_variance) {
    if (w.cols() != a.rows() || w.rows() != a.cols())
        throw Error(ErrorCode::DimensionMismatch, "sinr: W must be M x N for an N x M channel");
    const std::size_t m = w.rows();
    const ComplexBlock g = w * a;

    std::vector<double> weights(m * m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        double row_power = 0.0;
        for (std::size_t l = 0; l < m; ++l) row_power += std::norm(g(k, l));
        if (row_power > 0.0)
            for (std::size_t l = 0; l < m; ++l) weights[k * m + l] = std::norm(g(k, l)) / row_power;
    }

    SinrResult out;
    out.assignment = max_weight_assignment(m, weights);
    out.per_output.resize(m);
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t src = out.assignment[k];
        const double signal = std::norm(g(k, src));
        double interference = 0.0;
        for (std::size_t l = 0; l < m; ++l)
            if (l != src) interference += std::norm(g(k, l));
        double wnorm = 0.0;
        for (const cplx& v : w.row(k)) wnorm += std::norm(v);
        const double denom = interference + noise_variance * wnorm;
        double value;
        if (denom > 0.0) {
            value = signal / denom;
        } else {
            value = signal == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        }
        out.per_output[k] = value;
        sum += value;
    }
    out.average = sum / static_cast<double>(m);
    return out;
}

double to_db(double linear) {
    if (std::isinf(linear) && linear > 0.0) return linear;
    if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

std::pair<AmbiguityMap, ComplexBlock> resolve_ambiguity(const ComplexBlock& z, const ComplexBlock& s) {
    if (z.rows() != s.rows() || z.cols() != s.cols())
        throw Error(ErrorCode::DimensionMismatch, "resolve_ambiguity: Z and S shapes differ");
    const std::size_t m = z.rows();

    std::vector<double> znorm(m, 0.0), snorm(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (const cplx& v : z.row(i)) znorm[i] += std::norm(v);
        for (const cplx& v : s.row(i)) snorm[i] += std::norm(v);
    }
    auto inner = [&](std::size_t zi, std::size_t si) {  // <s, z> = sum conj(z) s
        cplx acc{};
        const auto zr = z.row(zi);
        const auto sr = s.row(si);
        for (std::size_t j = 0; j < zr.size(); ++j) acc += std::conj(zr[j]) * sr[j];
        return acc;
    };

    std::vector<double> weights(m * m, 0.0);
    std::vector<cplx> corr(m * m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
            corr[k * m + l] = inner(k, l);
            if (znorm[k] > 0.0 && snorm[l] > 0.0)
                weights[k * m + l] = std::abs(corr[k * m + l]) / std::sqrt(znorm[k] * snorm[l]);
        }

    AmbiguityMap map;
    map.permutation = max_weight_assignment(m, weights);
    map.scales.resize(m);
    ComplexBlock aligned(m, z.cols());
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t src = map.permutation[k];
        const cplx scale = znorm[k] > 0.0 ? corr[k * m + src] / znorm[k] : cplx{};
        map.scales[k] = scale;
        auto out = aligned.row(src);
        const auto in = z.row(k);
        for (std::size_t j = 0; j < in.size(); ++j) out[j] = scale * in[j];
    }
    return {std::move(map), std::move(aligned)};
}

double ser(const ComplexBlock& aligned, const ComplexBlock& s, const Constellation& constellation) {
    if (aligned.rows() != s.rows() || aligned.cols() != s.cols())
        throw Error(ErrorCode::DimensionMismatch, "ser: shapes differ");
    std::size_t errors = 0;
    const auto zd = aligned.data();
    const auto sd = s.data();
    for (std::size_t i = 0; i < zd.size(); ++i)
        if (constellation.nearest(zd[i]) != constellation.nearest(sd[i])) ++errors;
    return static_cast<double>(errors) / static_cast<double>(zd.size());
}

}  // namespace hgcma
