// SPDX-License-Identifier: Apache-2.0
#include "hgcma/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hgcma/error.hpp"
#include "hgcma/poly.hpp"

namespace hgcma {

namespace {

template <std::size_t N>
void require_finite(const Mat<N>& m, const char* what) {
    for (double e : m.a) {
        if (!std::isfinite(e)) throw Error(ErrorCode::InvalidInput, std::string(what) + ": non-finite input");
    }
}

// Jacobi rotation parameters zeroing the (p,q) entry of a symmetric 2x2 block.
void jacobi_angle(double app, double aqq, double apq, double& c, double& s) {
    const double theta = (aqq - app) / (2.0 * apq);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
    c = 1.0 / std::sqrt(t * t + 1.0);
    s = t * c;
}

template <std::size_t N>
struct Lu {
    Mat<N> lu;
    std::array<std::size_t, N> perm{};
};

template <std::size_t N>
Lu<N> lu_factor(const Mat<N>& a) {
    Lu<N> f{a, {}};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    for (std::size_t k = 0; k < N; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < N; ++i)
            if (std::fabs(f.lu(i, k)) > std::fabs(f.lu(piv, k))) piv = i;
        if (f.lu(piv, k) == 0.0) throw Error(ErrorCode::SingularSystem, "solve: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < N; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        for (std::size_t i = k + 1; i < N; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            for (std::size_t j = k + 1; j < N; ++j) f.lu(i, j) -= f.lu(i, k) * f.lu(k, j);
        }
    }
    return f;
}

template <std::size_t N>
Vec<N> lu_solve(const Lu<N>& f, const Vec<N>& b) {
    Vec<N> x{};
    for (std::size_t i = 0; i < N; ++i) {
        double s = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = N; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < N; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s / f.lu(i, i);
    }
    return x;
}

template <std::size_t N>
double determinant(const Mat<N>& a) {
    if constexpr (N == 2) {
        return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    } else {
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    }
}

// Monic characteristic polynomial of m, ascending coefficients.
template <std::size_t N>
std::vector<double> char_poly(const Mat<N>& m) {
    double tr = 0.0;
    for (std::size_t i = 0; i < N; ++i) tr += m(i, i);
    if constexpr (N == 2) {
        return {determinant(m), -tr, 1.0};
    } else {
        const double minors = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) + (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
                              (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
        return {-determinant(m), minors, -tr, 1.0};
    }
}

double polish_root(const std::vector<double>& c, double x) {
    const PolyReal p(c);
    const PolyReal dp = p.derivative();
    for (int it = 0; it < 4; ++it) {
        const double fx = p(x);
        const double d = dp(x);
        if (fx == 0.0 || d == 0.0) break;
        const double next = x - fx / d;
        if (!std::isfinite(next) || std::fabs(p(next)) >= std::fabs(fx)) break;
        x = next;
    }
    return x;
}

// Real roots (with multiplicity) of the monic quadratic x^2 + b1 x + b0.
bool quadratic_roots(double b1, double b0, double scale, double& r1, double& r2) {
    double disc = b1 * b1 - 4.0 * b0;
    if (disc < -1e-12 * scale * scale) return false;
    disc = std::max(disc, 0.0);
    const double q = -0.5 * (b1 + (b1 >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc));
    if (q == 0.0) {
        r1 = r2 = 0.0;
    } else {
        r1 = q;
        r2 = b0 / q;
    }
    return true;
}

}  // namespace

template <std::size_t N>
SymEig<N> eig_sym(const SymMat<N>& m) {
    Mat<N> a = m.matrix();
    require_finite(a, "eig_sym");
    Mat<N> v = Mat<N>::identity();
    const double total = frobenius(a);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += a(p, q) * a(p, q);
        if (off == 0.0 || std::sqrt(off) <= 1e-16 * total) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                if (a(p, q) == 0.0) continue;
                double c = 1.0;
                double s = 0.0;
                jacobi_angle(a(p, p), a(q, q), a(p, q), c, s);
                for (std::size_t k = 0; k < N; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < N; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < N; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::array<std::size_t, N> order{};
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymEig<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.values[k] = a(order[k], order[k]);
        out.vectors.set_column(k, v.column(order[k]));
    }
    return out;
}

template <std::size_t N>
GenEigPair<N> gen_eig(const SymMat<N>& r, const SignatureMatrix<N>& j) {
    require_finite(r.matrix(), "gen_eig");

    Mat<N> jr;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t k = 0; k < N; ++k) jr(i, k) = j.diag[i] * r(i, k);

    const double scale = std::max(frobenius(jr), 1e-300);
    const std::vector<double> cp = char_poly(jr);

    Vec<N> mu{};
    if constexpr (N == 2) {
        if (!quadratic_roots(cp[1], cp[0], scale, mu[0], mu[1]))
            throw Error(ErrorCode::DegeneratePencil, "gen_eig: complex generalized eigenvalues");
    } else {
        const std::vector<double> roots = real_roots(PolyReal(cp));
        if (roots.empty()) throw Error(ErrorCode::DegeneratePencil, "gen_eig: no real eigenvalue found");
        double x = roots.front();
        for (double y : roots)
            if (std::fabs(y) > std::fabs(x)) x = y;
        x = polish_root(cp, x);
        const double b1 = cp[2] + x;
        const double b0 = cp[1] + x * b1;
        mu[0] = x;
        if (!quadratic_roots(b1, b0, scale, mu[1], mu[2]))
            throw Error(ErrorCode::DegeneratePencil, "gen_eig: complex generalized eigenvalues");
    }
    for (double& m : mu) m = polish_root(cp, m);
    std::sort(mu.begin(), mu.end(), std::greater<>());

    GenEigPair<N> out;
    out.values = mu;

    // Eigenvectors: null space of the symmetric matrix R - mu J, one cluster
    // of (numerically) equal eigenvalues at a time.
    std::size_t start = 0;
    while (start < N) {
        std::size_t end = start + 1;
        while (end < N && std::fabs(mu[end] - mu[start]) <= 1e-8 * scale) ++end;
        double mean = 0.0;
        for (std::size_t k = start; k < end; ++k) mean += mu[k];
        mean /= static_cast<double>(end - start);

        SymMat<N> shifted;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = i; k < N; ++k)
                shifted.set(i, k, r(i, k) - (i == k ? mean * j.diag[i] : 0.0));
        const SymEig<N> se = eig_sym(shifted);

        std::array<std::size_t, N> by_mag{};
        std::iota(by_mag.begin(), by_mag.end(), std::size_t{0});
        std::stable_sort(by_mag.begin(), by_mag.end(),
                         [&](std::size_t a, std::size_t b) { return std::fabs(se.values[a]) < std::fabs(se.values[b]); });
        for (std::size_t k = start; k < end; ++k) {
            Vec<N> col = se.vectors.column(by_mag[k - start]);
            std::size_t big = 0;
            for (std::size_t i = 1; i < N; ++i)
                if (std::fabs(col[i]) > std::fabs(col[big])) big = i;
            if (col[big] < 0.0) col = -1.0 * col;
            out.vectors.set_column(k, col);
        }
        start = end;
    }

    if (std::fabs(determinant(out.vectors)) <= 1e-10)
        throw Error(ErrorCode::DegeneratePencil, "gen_eig: pencil is not diagonalizable");

    double residual = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const Vec<N> u = out.vectors.column(k);
        const Vec<N> diff = r * u - mu[k] * j.apply(u);
        residual = std::max(residual, norm(diff));
    }
    if (residual > 1e-8 * (frobenius(r) + max_abs(mu)))
        throw Error(ErrorCode::DegeneratePencil, "gen_eig: eigenpair residual too large");
    return out;
}

template <std::size_t N>
Vec<N> solve(const Mat<N>& a, const Vec<N>& b) {
    const Lu<N> f = lu_factor(a);
    Vec<N> x = lu_solve(f, b);
    const Vec<N> res = b - a * x;
    const Vec<N> dx = lu_solve(f, res);
    return x + dx;
}

template <std::size_t N>
Mat<N> inverse(const Mat<N>& a) {
    const Lu<N> f = lu_factor(a);
    Mat<N> inv;
    for (std::size_t k = 0; k < N; ++k) {
        Vec<N> e{};
        e[k] = 1.0;
        inv.set_column(k, lu_solve(f, e));
    }
    return inv;
}

template <std::size_t N>
Vec<N> solve_shifted(const SymMat<N>& r_mat, const SignatureMatrix<N>& j, double lambda, const Vec<N>& rhs) {
    SymMat<N> s = r_mat;
    for (std::size_t i = 0; i < N; ++i) s.set(i, i, r_mat(i, i) + lambda * j.diag[i]);
    const SymEig<N> se = eig_sym(s);
    double lo = std::fabs(se.values[0]);
    double hi = lo;
    for (double w : se.values) {
        lo = std::min(lo, std::fabs(w));
        hi = std::max(hi, std::fabs(w));
    }
    if (hi == 0.0 || lo == 0.0 || hi / lo > kShiftConditionLimit)
        throw Error(ErrorCode::SingularShift, "solve_shifted: shifted matrix is singular");
    return solve(s.matrix(), rhs);
}

template SymEig<2> eig_sym<2>(const SymMat<2>&);
template SymEig<3> eig_sym<3>(const SymMat<3>&);
template GenEigPair<2> gen_eig<2>(const SymMat<2>&, const SignatureMatrix<2>&);
template GenEigPair<3> gen_eig<3>(const SymMat<3>&, const SignatureMatrix<3>&);
template Vec<2> solve_shifted<2>(const SymMat<2>&, const SignatureMatrix<2>&, double, const Vec<2>&);
template Vec<3> solve_shifted<3>(const SymMat<3>&, const SignatureMatrix<3>&, double, const Vec<3>&);
template Vec<2> solve<2>(const Mat<2>&, const Vec<2>&);
template Vec<3> solve<3>(const Mat<3>&, const Vec<3>&);
template Mat<2> inverse<2>(const Mat<2>&);
template Mat<3> inverse<3>(const Mat<3>&);

HermitianEig eig_hermitian(std::size_t n, const std::vector<std::complex<double>>& h) {
    using cd = std::complex<double>;
    if (n == 0 || h.size() != n * n) throw Error(ErrorCode::InvalidInput, "eig_hermitian: expected a square matrix");
    double total = 0.0;
    for (const cd& e : h) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw Error(ErrorCode::InvalidInput, "eig_hermitian: non-finite input");
        total += std::norm(e);
    }
    total = std::sqrt(total);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i; k < n; ++k)
            if (std::abs(h[i * n + k] - std::conj(h[k * n + i])) > 1e-10 * (total + 1e-300))
                throw Error(ErrorCode::InvalidInput, "eig_hermitian: matrix is not Hermitian");

    std::vector<cd> a = h;
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = a[i * n + i].real();
    std::vector<cd> v(n * n, cd{});
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p * n + q]);
        if (off == 0.0 || std::sqrt(off) <= 1e-16 * total) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cd b = a[p * n + q];
                const double mag = std::abs(b);
                if (mag == 0.0) continue;
                const cd phase = b / mag;
                double c = 1.0;
                double s = 0.0;
                jacobi_angle(a[p * n + p].real(), a[q * n + q].real(), mag, c, s);
                // G = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p, q); A <- G^H A G.
                const cd gpq = s * phase;
                const cd gqp = -s * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    const cd akp = a[k * n + p];
                    const cd akq = a[k * n + q];
                    a[k * n + p] = c * akp + gqp * akq;
                    a[k * n + q] = gpq * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cd apk = a[p * n + k];
                    const cd aqk = a[q * n + k];
                    a[p * n + k] = c * apk + std::conj(gqp) * aqk;
                    a[q * n + k] = std::conj(gpq) * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                a[p * n + p] = a[p * n + p].real();
                a[q * n + q] = a[q * n + q].real();
                for (std::size_t k = 0; k < n; ++k) {
                    const cd vkp = v[k * n + p];
                    const cd vkq = v[k * n + q];
                    v[k * n + p] = c * vkp + gqp * vkq;
                    v[k * n + q] = gpq * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t k) { return a[i * n + i].real() < a[k * n + k].real(); });
    HermitianEig out;
    out.values.resize(n);
    out.vectors.assign(n * n, cd{});
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a[order[k] * n + order[k]].real();
        for (std::size_t i = 0; i < n; ++i) out.vectors[i * n + k] = v[i * n + order[k]];
    }
    return out;
}

}  // namespace hgcma
