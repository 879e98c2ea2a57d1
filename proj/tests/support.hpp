// SPDX-License-Identifier: Apache-2.0
// Test-side oracles. Nothing here calls into the library's numerical code:
// random data uses the standard library engines, products and solves are
// written out longhand.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "hgcma/block.hpp"

namespace oracle {

using cplx = std::complex<double>;
using hgcma::ComplexBlock;

inline cplx gauss(std::mt19937_64& g) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(g);
    return {re, n(g)};
}

inline ComplexBlock random_block(std::size_t rows, std::size_t cols, std::mt19937_64& g, double scale = 1.0) {
    ComplexBlock b(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) b(i, j) = scale * gauss(g);
    return b;
}

inline std::vector<cplx> random_row(std::size_t k, std::mt19937_64& g) {
    std::vector<cplx> v(k);
    for (auto& z : v) z = gauss(g);
    return v;
}

inline ComplexBlock matmul(const ComplexBlock& a, const ComplexBlock& b) {
    ComplexBlock c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            cplx s{};
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

inline ComplexBlock adjoint(const ComplexBlock& a) {
    ComplexBlock h(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) h(j, i) = std::conj(a(i, j));
    return h;
}

inline double fro(const ComplexBlock& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

inline double fro_diff(const ComplexBlock& a, const ComplexBlock& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - b(i, j));
    return std::sqrt(s);
}

inline double fro_from_identity(const ComplexBlock& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j) - (i == j ? cplx{1.0} : cplx{}));
    return std::sqrt(s);
}

inline double cm(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const cplx& z : v) s += (std::norm(z) - 1.0) * (std::norm(z) - 1.0);
    return s;
}

// CM cost of the two rows after [a, b; c, d] acts on them.
inline double pair_cost(const std::vector<cplx>& p, const std::vector<cplx>& q, cplx a, cplx b, cplx c, cplx d) {
    double s = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double x = std::norm(a * p[j] + b * q[j]) - 1.0;
        const double y = std::norm(c * p[j] + d * q[j]) - 1.0;
        s += x * x + y * y;
    }
    return s;
}

inline double givens_cost(const std::vector<cplx>& p, const std::vector<cplx>& q, double theta, double alpha) {
    const cplx s = std::polar(std::sin(theta), alpha);
    return pair_cost(p, q, std::cos(theta), s, -std::conj(s), std::cos(theta));
}

inline double shear_cost(const std::vector<cplx>& p, const std::vector<cplx>& q, double gamma, double beta) {
    const cplx s = std::polar(std::sinh(gamma), beta);
    return pair_cost(p, q, std::cosh(gamma), s, std::conj(s), std::cosh(gamma));
}

// Dense Gaussian elimination with partial pivoting.
template <std::size_t N>
std::array<double, N> solve(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (std::size_t i = N; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < N; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// A pair cost that is an exact quadratic in a 3-vector w living on a
// quadric. Coefficients are fitted by least squares from direct cost
// evaluations so the grid oracles never touch the library's moment formulas.
// Basis: w2^2, w3^2, w1w2, w1w3, w2w3, w1, w2, w3, 1 (w1^2 is eliminated
// through the quadric).
struct QuadraticFit {
    std::array<double, 9> c{};
    double max_residual = 0.0;

    static std::array<double, 9> basis(double w1, double w2, double w3) {
        return {w2 * w2, w3 * w3, w1 * w2, w1 * w3, w2 * w3, w1, w2, w3, 1.0};
    }
    double operator()(double w1, double w2, double w3) const {
        const auto b = basis(w1, w2, w3);
        double s = 0.0;
        for (std::size_t i = 0; i < 9; ++i) s += c[i] * b[i];
        return s;
    }

    // samples: (w, value) pairs.
    static QuadraticFit fit(const std::vector<std::pair<std::array<double, 3>, double>>& samples) {
        std::array<std::array<double, 9>, 9> ata{};
        std::array<double, 9> atb{};
        for (const auto& [w, v] : samples) {
            const auto b = basis(w[0], w[1], w[2]);
            for (std::size_t i = 0; i < 9; ++i) {
                atb[i] += b[i] * v;
                for (std::size_t j = 0; j < 9; ++j) ata[i][j] += b[i] * b[j];
            }
        }
        QuadraticFit q;
        q.c = solve<9>(ata, atb);
        for (const auto& [w, v] : samples)
            q.max_residual = std::max(q.max_residual, std::fabs(q(w[0], w[1], w[2]) - v) / (1.0 + std::fabs(v)));
        return q;
    }

    // Per fixed first coordinate: value = A + B cos t + C sin t + D cos 2t + E sin 2t
    // where (w2, w3) = rho (cos t, sin t).
    std::array<double, 5> trig_row(double w1, double rho) const {
        const double a2 = c[0] * rho * rho, a3 = c[1] * rho * rho;
        std::array<double, 5> r{};
        r[0] = c[8] + c[5] * w1 + 0.5 * (a2 + a3);
        r[1] = c[2] * w1 * rho + c[6] * rho;
        r[2] = c[3] * w1 * rho + c[7] * rho;
        r[3] = 0.5 * (a2 - a3);
        r[4] = 0.5 * c[4] * rho * rho;
        return r;
    }
};

// Minimum over the grid t in {t0 + i*step}, i = 0..n-1, for rows of the
// form produced by trig_row.
struct TrigTable {
    std::vector<double> c1, s1, c2, s2;
    TrigTable(double t0, double step, std::size_t n) : c1(n), s1(n), c2(n), s2(n) {
        for (std::size_t i = 0; i < n; ++i) {
            const double t = t0 + step * static_cast<double>(i);
            c1[i] = std::cos(t);
            s1[i] = std::sin(t);
            c2[i] = std::cos(2.0 * t);
            s2[i] = std::sin(2.0 * t);
        }
    }
    double min_row(const std::array<double, 5>& r) const {
        double best = std::numeric_limits<double>::infinity();
        const std::size_t n = c1.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double v = r[1] * c1[i] + r[2] * s1[i] + r[3] * c2[i] + r[4] * s2[i];
            best = v < best ? v : best;
        }
        return r[0] + best;
    }
};

// Exhaustive maximum-weight permutation for small n.
inline double best_assignment_total(std::size_t n, const std::vector<double>& w) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double best = -std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i * n + perm[i]];
        best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace oracle
