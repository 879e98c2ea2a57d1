// SPDX-License-Identifier: Apache-2.0
#include "hgcma/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "hgcma/error.hpp"

namespace hgcma {

namespace {

constexpr double kConstraintTol = 1e-6;
constexpr double kNullTol = 1e-9;
constexpr double kConsistencyTol = 1e-9;

template <std::size_t D>
double relative_constraint(const Vec<D>& u) {
    const auto j = SignatureMatrix<D>::hyperbolic();
    return std::fabs(j.form(u) - 1.0) / std::max(1.0, dot(u, u));
}

template <std::size_t D>
double poly_residual(const PolyReal& p, double x) {
    const double scale = p.residual_scale(x);
    return scale > 0.0 ? std::fabs(p(x)) / scale : 0.0;
}

// Newton on g(l) = u(l)^T J u(l) - 1 with u(l) = (R + l J)^-1 r.
// g'(l) = -2 (J u)^T (R + l J)^-1 (J u).
template <std::size_t D>
void polish(const SymMat<D>& r_mat, const Vec<D>& r, double& lambda, Vec<D>& u) {
    const auto j = SignatureMatrix<D>::hyperbolic();
    double g = j.form(u) - 1.0;
    for (int it = 0; it < 5 && g != 0.0; ++it) {
        try {
            const Vec<D> ju = j.apply(u);
            const Vec<D> v = solve_shifted(r_mat, j, lambda, ju);
            const double dg = -2.0 * dot(ju, v);
            if (dg == 0.0 || !std::isfinite(dg)) return;
            const double next = lambda - g / dg;
            const Vec<D> un = solve_shifted(r_mat, j, next, r);
            const double gn = j.form(un) - 1.0;
            if (!(std::fabs(gn) < std::fabs(g))) return;
            lambda = next;
            u = un;
            g = gn;
        } catch (const Error&) {
            return;
        }
    }
}

template <std::size_t D>
void consider(std::optional<HyperbolicMinimum<D>>& best, const SymMat<D>& r_mat, const Vec<D>& r,
              const PolyReal& p, double lambda, const Vec<D>& u_raw, bool singular) {
    if (!(u_raw[0] > 0.0)) return;
    for (double e : u_raw)
        if (!std::isfinite(e)) return;
    const double resid = relative_constraint(u_raw);
    if (resid > kConstraintTol) return;
    HyperbolicMinimum<D> c;
    c.u = project_to_sheet(u_raw);
    c.lambda = lambda;
    c.objective = hyperbolic_objective(r_mat, r, c.u);
    c.singular_shift = singular;
    c.poly_residual = poly_residual<D>(p, lambda);
    c.constraint_residual = resid;
    if (!best || c.objective < best->objective) best = c;
}

// R - mu J is singular. If (R - mu J) u = r is consistent, the solutions form
// u_p + span(null space); intersect a line of it with the sheet.
template <std::size_t D>
void singular_branch(std::optional<HyperbolicMinimum<D>>& best, const SymMat<D>& r_mat, const Vec<D>& r,
                     const PolyReal& p, double lambda) {
    const auto j = SignatureMatrix<D>::hyperbolic();
    SymMat<D> s = r_mat;
    for (std::size_t i = 0; i < D; ++i) s.set(i, i, r_mat(i, i) + lambda * j.diag[i]);
    const SymEig<D> se = eig_sym(s);
    const double scale = frobenius(r_mat) + std::fabs(lambda);
    if (scale == 0.0) return;

    std::vector<Vec<D>> null;
    Vec<D> up{};
    for (std::size_t k = 0; k < D; ++k) {
        const Vec<D> q = se.vectors.column(k);
        const double proj = dot(q, r);
        if (std::fabs(se.values[k]) <= kNullTol * scale) {
            if (std::fabs(proj) > kConsistencyTol * std::max(norm(r), scale)) return;
            null.push_back(q);
        } else {
            up = up + (proj / se.values[k]) * q;
        }
    }
    if (null.empty()) return;

    // Direction: projection of e2 onto the null space, then e3, then e1.
    Vec<D> dir{};
    bool found = false;
    for (std::size_t axis : {std::size_t{1}, std::size_t{D - 1}, std::size_t{0}}) {
        dir = Vec<D>{};
        for (const Vec<D>& q : null) dir = dir + q[axis] * q;
        const double n = norm(dir);
        if (n > 1e-12) {
            dir = (1.0 / n) * dir;
            found = true;
            break;
        }
    }
    if (!found) return;

    // (up + t dir)^T J (up + t dir) = 1
    const double qa = j.form(dir);
    const double qb = 2.0 * dot(up, j.apply(dir));
    const double qc = j.form(up) - 1.0;
    std::vector<double> ts;
    if (qa == 0.0) {
        if (qb != 0.0) ts.push_back(-qc / qb);
    } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc < 0.0) return;
        const double sq = std::sqrt(disc);
        const double qq = -0.5 * (qb + std::copysign(sq, qb));
        if (qq != 0.0) {
            ts.push_back(qq / qa);
            ts.push_back(qc / qq);
        } else {
            ts.push_back(0.0);
        }
        std::sort(ts.begin(), ts.end(), std::greater<>());
    }
    for (double t : ts) consider(best, r_mat, r, p, lambda, up + t * dir, true);
}

}  // namespace

template <std::size_t D>
PolyReal lagrange_polynomial(const GenEigPair<D>& pencil, const Vec<D>& r) {
    const auto j = SignatureMatrix<D>::hyperbolic();
    const Vec<D> a = transpose(pencil.vectors) * r;
    const Vec<D> b = inverse(pencil.vectors) * j.apply(r);
    const Vec<D>& l = pencil.values;
    std::vector<double> c(2 * D + 1, 0.0);
    if constexpr (D == 3) {
        const double e1 = l[0] + l[1] + l[2];
        const double e2 = l[0] * l[1] + l[0] * l[2] + l[1] * l[2];
        const double e3 = l[0] * l[1] * l[2];
        c[6] = 1.0;
        c[5] = 2.0 * e1;
        c[4] = e1 * e1 + 2.0 * e2;
        c[3] = 2.0 * e3 + 2.0 * e1 * e2;
        c[2] = e2 * e2 + 2.0 * e1 * e3;
        c[1] = 2.0 * e2 * e3;
        c[0] = e3 * e3;
        for (std::size_t i = 0; i < 3; ++i) {
            const double w = a[i] * b[i];
            const double s = l[(i + 1) % 3] + l[(i + 2) % 3];
            const double p = l[(i + 1) % 3] * l[(i + 2) % 3];
            c[4] -= w;
            c[3] -= w * 2.0 * s;
            c[2] -= w * (s * s + 2.0 * p);
            c[1] -= w * 2.0 * s * p;
            c[0] -= w * p * p;
        }
    } else {
        const double e1 = l[0] + l[1];
        const double e2 = l[0] * l[1];
        c[4] = 1.0;
        c[3] = 2.0 * e1;
        c[2] = e1 * e1 + 2.0 * e2;
        c[1] = 2.0 * e1 * e2;
        c[0] = e2 * e2;
        for (std::size_t i = 0; i < 2; ++i) {
            const double w = a[i] * b[i];
            const double o = l[1 - i];
            c[2] -= w;
            c[1] -= w * 2.0 * o;
            c[0] -= w * o * o;
        }
    }
    return PolyReal(std::move(c));
}

template <std::size_t D>
double hyperbolic_objective(const SymMat<D>& r_mat, const Vec<D>& r, const Vec<D>& u) {
    return dot(u, r_mat * u) - 2.0 * dot(r, u);
}

template <std::size_t D>
Vec<D> project_to_sheet(Vec<D> u) {
    double s = 1.0;
    for (std::size_t i = 1; i < D; ++i) s += u[i] * u[i];
    u[0] = std::sqrt(s);
    return u;
}

template <std::size_t D>
std::optional<HyperbolicMinimum<D>> minimize_on_hyperbola(const SymMat<D>& r_mat, const Vec<D>& r) {
    const auto j = SignatureMatrix<D>::hyperbolic();
    GenEigPair<D> pencil;
    try {
        pencil = gen_eig(r_mat, j);
    } catch (const Error&) {
        return std::nullopt;
    }
    const PolyReal p = lagrange_polynomial(pencil, r);
    if (p.is_zero()) return std::nullopt;

    std::optional<HyperbolicMinimum<D>> best;
    for (double lambda : real_roots(p)) {
        try {
            Vec<D> u = solve_shifted(r_mat, j, lambda, r);
            polish(r_mat, r, lambda, u);
            consider(best, r_mat, r, p, lambda, u, false);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::SingularShift && e.code() != ErrorCode::SingularSystem) throw;
        }
    }
    for (double mu : pencil.values) singular_branch(best, r_mat, r, p, -mu);
    return best;
}

template PolyReal lagrange_polynomial<2>(const GenEigPair<2>&, const Vec<2>&);
template PolyReal lagrange_polynomial<3>(const GenEigPair<3>&, const Vec<3>&);
template double hyperbolic_objective<2>(const SymMat<2>&, const Vec<2>&, const Vec<2>&);
template double hyperbolic_objective<3>(const SymMat<3>&, const Vec<3>&, const Vec<3>&);
template Vec<2> project_to_sheet<2>(Vec<2>);
template Vec<3> project_to_sheet<3>(Vec<3>);
template std::optional<HyperbolicMinimum<2>> minimize_on_hyperbola<2>(const SymMat<2>&, const Vec<2>&);
template std::optional<HyperbolicMinimum<3>> minimize_on_hyperbola<3>(const SymMat<3>&, const Vec<3>&);

}  // namespace hgcma
