// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hgcma/error.hpp"
#include "hgcma/separators.hpp"
#include "hgcma/signal.hpp"
#include "hgcma/whitening.hpp"
#include "support.hpp"

using namespace hgcma;

namespace {

struct Problem {
    ChannelScenario sc;
    ComplexBlock s, y;
};

Problem make_problem(std::size_t m, std::size_t n, std::size_t k, double snr_db, std::uint64_t seed, bool noiseless) {
    const auto psk = Constellation::psk8();
    Problem p;
    p.sc = make_scenario(m, n, k, snr_db, psk, seed);
    if (noiseless) p.sc.noise_variance = 0.0;
    p.s = gen_sources(m, k, psk, seed + 1000);
    p.y = observe(p.sc, p.s);
    return p;
}

double max_offdiag(const ComplexBlock& w, const ComplexBlock& a) {
    const auto g = oracle::matmul(w, a);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        double peak = 0.0;
        for (std::size_t j = 0; j < g.cols(); ++j) peak = std::max(peak, std::abs(g(i, j)));
        bool seen_peak = false;
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const double v = std::abs(g(i, j));
            if (v == peak && !seen_peak) {
                seen_peak = true;
                continue;
            }
            worst = std::max(worst, v / peak);
        }
    }
    return worst;
}

double consistency(const SeparatorState& st, const ComplexBlock& y) {
    return oracle::fro_diff(st.work, oracle::matmul(st.w, y)) / oracle::fro(st.work);
}

// DFT rows: unit modulus, exactly orthogonal.
ComplexBlock dft_rows(std::size_t m, std::size_t k) {
    ComplexBlock s(m, k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) s(i, j) = std::polar(1.0, 2.0 * std::numbers::pi * double((i + 1) * j) / double(k));
    return s;
}

}  // namespace

TEST_CASE("G-CMA on an identity channel") {
    const auto psk = Constellation::psk8();
    const auto s = gen_sources(2, 400, psk, 3);
    const auto st = run_gcma(s, 2);
    CHECK(ser(resolve_ambiguity(st.work, s).second, s, psk) == 0.0);
    CHECK(consistency(st, s) < 1e-10);
}

TEST_CASE("G-CMA cost trace is non-increasing") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto pr = make_problem(4, 6, 200, 15.0, seed, false);
        const auto st = run_gcma(pr.y, 4);
        REQUIRE(st.cost_trace.size() == 1 + 10 * 6);
        for (std::size_t i = 1; i < st.cost_trace.size(); ++i)
            CHECK(st.cost_trace[i] <= st.cost_trace[i - 1] + 1e-9 * (1.0 + st.cost_trace[i - 1]));
        CHECK(st.rotations == 60);
        CHECK(st.sweeps == 10);
        CHECK(consistency(st, pr.y) < 1e-8);
    }
}

TEST_CASE("G-CMA separates noiseless square mixtures") {
    // Outputs are exact symbols; the residual mixing left by a finite-sample
    // whitener is of order 1/sqrt(K).
    int clean = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto pr = make_problem(3, 3, 500, 0.0, seed, true);
        const auto st = run_gcma(pr.y, 3);
        const double ser_v = ser(resolve_ambiguity(st.work, pr.s).second, pr.s, Constellation::psk8());
        clean += ser_v == 0.0 ? 1 : 0;
        CHECK(max_offdiag(st.w, pr.sc.mixing) < 0.15);
    }
    CHECK(clean >= 28);
}

TEST_CASE("G-CMA is scale equivariant") {
    const auto pr = make_problem(3, 4, 300, 20.0, 5, false);
    const auto a = run_gcma(pr.y, 3);
    const auto b = run_gcma(cplx{3.5} * pr.y, 3);
    const auto za = resolve_ambiguity(a.work, pr.s).second;
    const auto zb = resolve_ambiguity(b.work, pr.s).second;
    CHECK(oracle::fro_diff(za, zb) < 1e-8 * oracle::fro(za));
}

TEST_CASE("HG-CMA fixed point on separated CM input") {
    const auto psk = Constellation::psk8();
    const auto s = gen_sources(3, 300, psk, 9);
    SeparatorConfig cfg;
    cfg.preprocess = Preprocess::None;
    for (auto v : {ShearVariant::Linear, ShearVariant::SemiExact, ShearVariant::Exact}) {
        cfg.variant = v;
        const auto st = run_hgcma(s, 3, cfg);
        CHECK(st.cost_trace.back() < 1e-12);
        // W = permutation times unit-modulus diagonal.
        for (std::size_t i = 0; i < 3; ++i) {
            int big = 0;
            for (std::size_t j = 0; j < 3; ++j) {
                const double a = std::abs(st.w(i, j));
                if (std::fabs(a - 1.0) < 1e-6) ++big;
                else CHECK(a < 1e-6);
            }
            CHECK(big == 1);
        }
    }
    cfg.preprocess = Preprocess::None;
    CHECK_THROWS_AS(run_hgcma(gen_sources(3, 50, psk, 1), 2, cfg), Error);
}

TEST_CASE("HG-CMA exact is monotone per pair visit and stays consistent") {
    SeparatorConfig cfg;
    cfg.variant = ShearVariant::Exact;
    cfg.sweeps = 4;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto pr = make_problem(4, 5, 100, 20.0, seed, false);
        const auto st = run_hgcma(pr.y, 4, cfg);
        for (std::size_t i = 1; i < st.cost_trace.size(); ++i)
            CHECK(st.cost_trace[i] <= st.cost_trace[i - 1] + 1e-9 * (1.0 + st.cost_trace[i - 1]));
        CHECK(consistency(st, pr.y) < 1e-8);
    }
}

TEST_CASE("HG-CMA state consistency for every variant and input stage") {
    for (auto pre : {Preprocess::Whiten, Preprocess::Project}) {
        for (auto v : {ShearVariant::Linear, ShearVariant::SemiExact, ShearVariant::Exact}) {
            SeparatorConfig cfg;
            cfg.variant = v;
            cfg.preprocess = pre;
            for (std::size_t sweeps : {1u, 3u}) {
                cfg.sweeps = sweeps;
                const auto pr = make_problem(3, 5, 60, 15.0, sweeps, false);
                const auto st = run_hgcma(pr.y, 3, cfg);
                CHECK(st.w.rows() == 3);
                CHECK(st.w.cols() == 5);
                CHECK(consistency(st, pr.y) < 1e-8);
                CHECK(st.rotations == 3 * sweeps);
            }
        }
    }
}

TEST_CASE("HG-CMA noiseless square recovery") {
    int clean = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto pr = make_problem(3, 3, 500, 0.0, seed, true);
        const auto st = run_hgcma(pr.y, 3);
        clean += max_offdiag(st.w, pr.sc.mixing) < 1e-2 ? 1 : 0;
    }
    CHECK(clean >= 28);
}

TEST_CASE("HG-CMA beats G-CMA with few samples") {
    double hg = 0.0, gc = 0.0;
    const int trials = 60;
    for (int t = 0; t < trials; ++t) {
        const auto pr = make_problem(5, 7, 20, 20.0, 500 + t, false);
        hg += to_db(sinr(run_hgcma(pr.y, 5).w, pr.sc.mixing, pr.sc.noise_variance).average);
        gc += to_db(sinr(run_gcma(pr.y, 5).w, pr.sc.mixing, pr.sc.noise_variance).average);
    }
    CHECK(hg / trials > gc / trials);
}

TEST_CASE("early stop") {
    const auto pr = make_problem(3, 3, 200, 0.0, 4, true);
    SeparatorConfig cfg;
    cfg.sweeps = 50;
    cfg.epsilon = 1e-10;
    const auto st = run_gcma(pr.y, 3, cfg);
    CHECK(st.sweeps < 50);
    cfg.record_trace = false;
    CHECK(run_gcma(pr.y, 3, cfg).cost_trace.empty());
    cfg.sweeps = 0;
    CHECK_THROWS_AS(run_gcma(pr.y, 3, cfg), Error);
}

TEST_CASE("LS-CMA") {
    SUBCASE("separated CM data is a fixed point") {
        const auto s = dft_rows(3, 64);
        const auto st = run_lscma(s, 3, 10);
        CHECK(oracle::fro_diff(st.w, fit_whitener(s, 3).matrix) < 1e-10);
        CHECK(st.rotations == 1);
    }
    SUBCASE("noiseless two-source mixtures") {
        int clean = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto pr = make_problem(2, 2, 500, 0.0, seed, true);
            const auto st = run_lscma(pr.y, 2, 50);
            CHECK(st.rotations <= 50);
            clean += ser(resolve_ambiguity(st.work, pr.s).second, pr.s, Constellation::psk8()) == 0.0 ? 1 : 0;
        }
        CHECK(clean >= 90);
    }
    SUBCASE("rank-deficient data") {
        ComplexBlock y(2, 10);
        for (std::size_t j = 0; j < 10; ++j) y(0, j) = y(1, j) = std::polar(1.0, double(j));
        CHECK_THROWS_AS(run_lscma(y, 2, 5), Error);
    }
}
