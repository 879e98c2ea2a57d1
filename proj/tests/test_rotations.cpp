// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grid_oracles.hpp"
#include "hgcma/error.hpp"
#include "hgcma/rotations.hpp"
#include "hgcma/signal.hpp"
#include "support.hpp"

using namespace hgcma;
using oracle::cplx;

namespace {

constexpr cplx I{0.0, 1.0};

ComplexBlock two_rows(const std::vector<cplx>& p, const std::vector<cplx>& q) {
    ComplexBlock b(2, p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        b(0, j) = p[j];
        b(1, j) = q[j];
    }
    return b;
}

double cost_after(const GivensParams& g, const std::vector<cplx>& p, const std::vector<cplx>& q) {
    return oracle::pair_cost(p, q, g.c, g.s, -std::conj(g.s), g.c);
}

double cost_after(const ShearParams& h, const std::vector<cplx>& p, const std::vector<cplx>& q) {
    return oracle::pair_cost(p, q, h.ch, h.sh, std::conj(h.sh), h.ch);
}

Vec<3> u_of(const ShearParams& h) {
    const cplx w = 2.0 * h.ch * h.sh;
    return {h.ch * h.ch + std::norm(h.sh), w.real(), w.imag()};
}

// Random pair rows resembling partially separated CM data.
std::pair<std::vector<cplx>, std::vector<cplx>> mixed_pair(std::size_t k, std::mt19937_64& g) {
    const auto s = gen_sources(2, k, Constellation::psk8(), g());
    std::vector<cplx> p(k), q(k);
    const cplx a = oracle::gauss(g), b = oracle::gauss(g), c = oracle::gauss(g), d = oracle::gauss(g);
    for (std::size_t j = 0; j < k; ++j) {
        p[j] = a * s(0, j) + b * s(1, j) + 0.05 * oracle::gauss(g);
        q[j] = c * s(0, j) + d * s(1, j) + 0.05 * oracle::gauss(g);
    }
    return {p, q};
}

}  // namespace

TEST_CASE("givens_params hand cases") {
    SUBCASE("separated rows give the identity") {
        const std::vector<cplx> p{1.0, -1.0}, q{I, -I};
        const auto t = givens_matrix(p, q);
        CHECK(t(0, 0) == 0.0);
        CHECK(t(1, 1) == 0.0);
        CHECK(t(2, 2) == doctest::Approx(2.0));
        const auto g = givens_params(p, q);
        CHECK(g.c == 1.0);
        CHECK(g.s == cplx{});
    }
    SUBCASE("zero rows give the identity") {
        const std::vector<cplx> z(4, cplx{});
        const auto g = givens_params(z, z);
        CHECK(g.c == 1.0);
        CHECK(g.s == cplx{});
    }
    SUBCASE("mismatched rows") {
        const std::vector<cplx> a(3), b(2);
        CHECK_THROWS_AS(givens_params(a, b), Error);
    }
}

TEST_CASE("givens_params attains the grid minimum") {
    std::mt19937_64 g(101);
    const oracle::GivensGrid grid(1e-3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = oracle::random_row(50, g), q = oracle::random_row(50, g);
        const auto gp = givens_params(p, q);
        CHECK(gp.c >= 0.0);
        CHECK(std::fabs(gp.c * gp.c + std::norm(gp.s) - 1.0) <= 1e-12);
        const auto res = grid.minimum(p, q, g);
        CHECK(res.fit_residual < 1e-10);
        CHECK(cost_after(gp, p, q) <= res.min_cost + 1e-6);
    }
}

TEST_CASE("givens preserves pair power and is unitary") {
    std::mt19937_64 g(5);
    for (int trial = 0; trial < 200; ++trial) {
        auto [p, q] = mixed_pair(30, g);
        const auto gp = givens_params(p, q);
        const auto a = action_matrix(gp);
        // A A^H = I
        const cplx m00 = a[0] * std::conj(a[0]) + a[1] * std::conj(a[1]);
        const cplx m01 = a[0] * std::conj(a[2]) + a[1] * std::conj(a[3]);
        const cplx m11 = a[2] * std::conj(a[2]) + a[3] * std::conj(a[3]);
        CHECK(std::abs(m00 - 1.0) < 1e-12);
        CHECK(std::abs(m01) < 1e-12);
        CHECK(std::abs(m11 - 1.0) < 1e-12);
        auto b = two_rows(p, q);
        const double before = std::pow(oracle::fro(b), 2);
        apply_two_row(gp, b);
        CHECK(std::pow(oracle::fro(b), 2) == doctest::Approx(before).epsilon(1e-12));
        CHECK(cm_cost(b) <= cm_cost(two_rows(p, q)) + 1e-9);
    }
}

TEST_CASE("apply_two_row") {
    std::mt19937_64 g(6);
    SUBCASE("identity") {
        const auto b0 = oracle::random_block(4, 7, g);
        auto b = b0;
        apply_two_row(GivensParams{1, 3, 1.0, {}}, b);
        apply_two_row(ShearParams{0, 2, 1.0, {}}, b);
        CHECK(b == b0);
    }
    SUBCASE("quarter turn swaps with a sign") {
        ComplexBlock b(2, 2);
        b(0, 0) = 1.0;
        b(1, 1) = 1.0;
        apply_two_row(GivensParams{0, 1, std::cos(std::numbers::pi / 2), {1.0, 0.0}}, b);
        CHECK(std::abs(b(0, 0)) < 1e-15);
        CHECK(b(0, 1) == cplx{1.0});
        CHECK(b(1, 0) == cplx{-1.0});
        CHECK(std::abs(b(1, 1)) < 1e-15);
    }
    SUBCASE("only rows p and q change") {
        const auto b0 = oracle::random_block(4, 5, g);
        auto b = b0;
        apply_two_row(ShearParams::from_angles(1, 3, 0.4, 0.2), b);
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(b(0, j) == b0(0, j));
            CHECK(b(2, j) == b0(2, j));
        }
        const cplx sh = std::polar(std::sinh(0.4), 0.2);
        CHECK(std::abs(b(1, 2) - (std::cosh(0.4) * b0(1, 2) + sh * b0(3, 2))) < 1e-14);
        CHECK(std::abs(b(3, 2) - (std::conj(sh) * b0(1, 2) + std::cosh(0.4) * b0(3, 2))) < 1e-14);
    }
    SUBCASE("shear inverse pair") {
        for (int t = 0; t < 100; ++t) {
            const auto b0 = oracle::random_block(3, 9, g);
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            const double gam = u(g), bet = 1.5 * u(g);
            auto b = b0;
            apply_two_row(ShearParams::from_angles(0, 2, gam, bet), b);
            apply_two_row(ShearParams::from_angles(0, 2, -gam, bet), b);
            CHECK(oracle::fro_diff(b, b0) < 1e-12 * (1.0 + oracle::fro(b0)));
        }
    }
    SUBCASE("range checks") {
        auto b = oracle::random_block(3, 2, g);
        CHECK_THROWS_AS(apply_two_row(GivensParams{1, 1, 1.0, {}}, b), Error);
        CHECK_THROWS_AS(apply_two_row(ShearParams{0, 3, 1.0, {}}, b), Error);
        CHECK_THROWS_AS(apply_two_row(GivensParams{2, 1, 1.0, {}}, b), Error);
        CHECK_THROWS_AS(apply_norm(NormParams{0, 5, 1.0, 1.0}, b), Error);
    }
}

TEST_CASE("shear structure") {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 1000; ++t) {
        const double gam = 2.0 * u(g), bet = 1.5 * u(g);
        const auto h = ShearParams::from_angles(0, 1, gam, bet);
        const auto a = action_matrix(h);
        CHECK(a[1] == std::conj(a[2]));
        CHECK(std::abs(a[0] * a[3] - a[1] * a[2] - 1.0) <= 1e-10 * std::cosh(2 * gam));
        CHECK(h.gamma() == doctest::Approx(gam).epsilon(1e-10).scale(1.0));
        if (gam != 0.0) CHECK(h.beta() == doctest::Approx(bet).epsilon(1e-10).scale(1.0));
        const auto back = ShearParams::from_u(0, 1, u_of(h));
        CHECK(back.ch == doctest::Approx(h.ch).epsilon(1e-12));
        CHECK(std::abs(back.sh - h.sh) < 1e-10 * std::cosh(2 * gam));
    }
}

TEST_CASE("shear objective tracks the pair cost") {
    // cost after a Shear = 2 F(u) + a u-independent constant.
    std::mt19937_64 g(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const auto p = oracle::random_row(20, g), q = oracle::random_row(20, g);
        const auto m = shear_moments(p, q);
        const auto h0 = ShearParams::from_angles(0, 1, 0.0, 0.0);
        const double offset = cost_after(h0, p, q) - 2.0 * shear_objective(m, u_of(h0));
        for (int k = 0; k < 10; ++k) {
            const auto h = ShearParams::from_angles(0, 1, u(g), 1.5 * u(g));
            const double c = cost_after(h, p, q);
            CHECK(2.0 * shear_objective(m, u_of(h)) + offset == doctest::Approx(c).epsilon(1e-9));
        }
    }
}

TEST_CASE("shear_linear") {
    SUBCASE("both formulas vanish") {
        const std::vector<cplx> p{1.0, 0.0}, q{0.0, 1.0};
        CHECK(shear_phase(p, q) == 0.0);
        const auto h = shear_linear(p, q);
        CHECK(h.ch == 1.0);
        CHECK(h.sh == cplx{});
    }
    SUBCASE("single sample") {
        const std::vector<cplx> p{2.0}, q{2.0 * I};
        CHECK(shear_phase(p, q) == doctest::Approx(-std::numbers::pi / 2));
        const auto h = shear_linear(p, q);
        // 0.5 * atanh(-12/28), with (gamma, beta) = (g, -pi/2) read back as
        // (-g, pi/2) by the sign convention of gamma().
        const double want = 0.5 * 0.5 * std::log((1.0 - 12.0 / 28.0) / (1.0 + 12.0 / 28.0));
        CHECK(std::abs(h.sh) == doctest::Approx(std::sinh(std::fabs(want))).epsilon(1e-12));
        CHECK(h.sh.real() == doctest::Approx(0.0).scale(1.0));
        CHECK(h.sh.imag() == doctest::Approx(-std::sinh(want)).epsilon(1e-12));
        CHECK(want == doctest::Approx(-0.2290727).epsilon(1e-6));
    }
    SUBCASE("linearized stationarity on random blocks") {
        std::mt19937_64 g(9);
        int solved = 0;
        for (int t = 0; t < 500; ++t) {
            auto [p, q] = mixed_pair(40, g);
            ShearDiagnostics d;
            const auto h = shear_linear(p, q, 0, 1, &d);
            CHECK(std::fabs(h.ch * h.ch - std::norm(h.sh) - 1.0) <= 1e-10);
            if (d.clamped) continue;
            ++solved;
            // Independent reduced moments at the returned phase.
            const double beta = h.beta();
            double r1 = 0, r2 = 0, a11 = 0, a12 = 0, a22 = 0;
            for (std::size_t j = 0; j < p.size(); ++j) {
                const double x1 = 0.5 * (std::norm(p[j]) + std::norm(q[j]));
                const cplx pq = p[j] * std::conj(q[j]);
                const double x2 = std::cos(beta) * pq.real() + std::sin(beta) * pq.imag();
                r1 += x1;
                r2 += x2;
                a11 += x1 * x1;
                a12 += x1 * x2;
                a22 += x2 * x2;
            }
            const double lhs = std::tanh(2.0 * h.gamma()) * (a11 + a22 - r1);
            CHECK(std::fabs(lhs - (r2 - a12)) <= 1e-8 * (std::fabs(r2) + std::fabs(a12) + 1.0));
        }
        CHECK(solved > 400);
    }
}

TEST_CASE("shear_semi_exact") {
    SUBCASE("symmetric case") {
        // Every sample has r = [1, 0, 0]: R~ = K I scaled onto [1,0], r~ = [K, 0].
        const std::vector<cplx> p{1.0, I}, q{1.0, -I};
        // |p|^2 + |q|^2 = 2, and p q* = 1, -1: r2 sums to zero.
        ShearDiagnostics d;
        const auto h = shear_semi_exact(p, q, 0, 1, &d);
        CHECK(std::fabs(h.gamma()) < 1e-8);
    }
    SUBCASE("unit rows") {
        const std::vector<cplx> p{1.0, 0.0}, q{0.0, 1.0};
        // Scan the exact pair cost over gamma with beta = 0.
        double best = INFINITY;
        for (int i = -3000; i <= 3000; ++i) best = std::fmin(best, oracle::shear_cost(p, q, i * 1e-3, 0.0));
        const auto h = shear_semi_exact(p, q);
        CHECK(cost_after(h, p, q) <= best + 1e-6);
        CHECK(std::fabs(h.ch * h.ch - std::norm(h.sh) - 1.0) <= 1e-10);
    }
    SUBCASE("grid oracle with beta fixed") {
        std::mt19937_64 g(10);
        const oracle::ShearGrid grid(-1.0, 1.0, 1e-3);
        for (int t = 0; t < 200; ++t) {
            auto [p, q] = mixed_pair(30, g);
            ShearDiagnostics d;
            const auto h = shear_semi_exact(p, q, 0, 1, &d);
            CHECK(std::fabs(h.ch * h.ch - std::norm(h.sh) - 1.0) <= 1e-10);
            if (d.fallback) continue;
            const auto res = grid.minimum_fixed_beta(p, q, shear_phase(p, q), g);
            CHECK(res.fit_residual < 1e-9);
            // Costs are 2x the reduced objective.
            CHECK(cost_after(h, p, q) <= res.min_cost + 2e-6);
        }
    }
}

TEST_CASE("shear_exact") {
    SUBCASE("unit rows use the singular branch") {
        const std::vector<cplx> p{1.0, 0.0}, q{0.0, 1.0};
        ShearDiagnostics d;
        const auto h = shear_exact(p, q, 0, 1, &d);
        CHECK(d.used == ShearVariant::Exact);
        CHECK(d.singular_shift);
        const auto u = u_of(h);
        CHECK(u[0] == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(u[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
        CHECK(u[2] == doctest::Approx(0.0).scale(1.0));
        const auto m = shear_moments(p, q);
        CHECK(shear_objective(m, u) == doctest::Approx(-2.0));
        CHECK(shear_objective(m, {1.0, 0.0, 0.0}) == doctest::Approx(-1.5));
    }
    SUBCASE("grid oracle and dominance over semi-exact") {
        std::mt19937_64 g(11);
        const oracle::ShearGrid grid(-1.5, 1.5, 2e-3);
        for (int t = 0; t < 30; ++t) {
            auto [p, q] = mixed_pair(50, g);
            ShearDiagnostics d;
            const auto h = shear_exact(p, q, 0, 1, &d);
            CHECK(std::fabs(h.ch * h.ch - std::norm(h.sh) - 1.0) <= 1e-10);
            const auto res = grid.minimum(p, q, g);
            CHECK(res.fit_residual < 1e-9);
            CHECK(cost_after(h, p, q) <= res.min_cost + 2e-5);
            const auto m = shear_moments(p, q);
            const auto hs = shear_semi_exact(p, q);
            const double scale = 1.0 + std::fabs(shear_objective(m, u_of(hs)));
            CHECK(shear_objective(m, u_of(h)) <= shear_objective(m, u_of(hs)) + 1e-8 * scale);
        }
    }
    SUBCASE("never worse than the identity") {
        std::mt19937_64 g(12);
        for (int t = 0; t < 300; ++t) {
            const auto p = oracle::random_row(10, g), q = oracle::random_row(10, g);
            for (auto v : {ShearVariant::Exact, ShearVariant::SemiExact}) {
                const auto h = shear_params(v, p, q);
                CHECK(cost_after(h, p, q) <= oracle::pair_cost(p, q, 1.0, 0.0, 0.0, 1.0) + 1e-9);
            }
        }
    }
}

TEST_CASE("norm_param") {
    const std::vector<cplx> ones{1.0, I, -1.0}, twos{2.0, 2.0 * I};
    CHECK(norm_param(ones) == doctest::Approx(1.0));
    CHECK(norm_param(twos) == doctest::Approx(0.5));
    const std::vector<cplx> r{1.0, 2.0};
    const double lam = norm_param(r);
    CHECK(lam == doctest::Approx(std::sqrt(5.0 / 17.0)));
    double best_l = 0.0, best = INFINITY;
    for (int i = 1; i < 200000; ++i) {
        const double l = i * 1e-5;
        const double c = oracle::cm({l * r[0], l * r[1]});
        if (c < best) {
            best = c;
            best_l = l;
        }
    }
    CHECK(lam == doctest::Approx(best_l).epsilon(2e-5));

    bool degenerate = false;
    const std::vector<cplx> zero(3);
    CHECK(norm_param(zero, &degenerate) == 1.0);
    CHECK(degenerate);

    std::mt19937_64 g(13);
    for (int t = 0; t < 100; ++t) {
        auto b = oracle::random_block(2, 15, g, 1.7);
        const double before = cm_cost(b);
        apply_norm(norm_params(b.row(0), b.row(1)), b);
        CHECK(cm_cost(b) <= before + 1e-12);
    }
    auto b = oracle::random_block(2, 4, g);
    const auto b0 = b;
    apply_norm(NormParams{0, 1, 1.0, 1.0}, b);
    CHECK(b == b0);
    ComplexBlock tw(2, 2);
    tw(0, 0) = tw(0, 1) = 2.0;
    apply_norm(NormParams{0, 1, 0.5, 1.0}, tw);
    CHECK(tw(0, 0) == cplx{1.0});
}
