// SPDX-License-Identifier: Apache-2.0
#include "hgcma/rotations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hgcma/error.hpp"
#include "hgcma/hyperbolic.hpp"
#include "hgcma/linalg.hpp"

namespace hgcma {

namespace {

void check_rows(RowView rp, RowView rq) {
    if (rp.size() != rq.size()) throw Error(ErrorCode::DimensionMismatch, "pair rows differ in length");
    if (rp.empty()) throw Error(ErrorCode::InvalidInput, "pair rows are empty");
}

void check_pair(std::size_t p, std::size_t q, std::size_t rows) {
    if (!(p < q && q < rows))
        throw Error(ErrorCode::InvalidInput,
                    "row pair (" + std::to_string(p) + ", " + std::to_string(q) + ") out of range");
}

struct PhaseSums {
    double num = 0.0;  // sum r3 (r1 - 1)
    double den = 0.0;  // sum r2 (r1 - 1)
};

double phase_from(const PhaseSums& s) {
    if (s.den == 0.0) {
        if (s.num == 0.0) return 0.0;
        return std::copysign(std::numbers::pi / 2.0, s.num);
    }
    return std::atan(s.num / s.den);
}

PhaseSums phase_sums(RowView rp, RowView rq) {
    PhaseSums s;
    for (std::size_t k = 0; k < rp.size(); ++k) {
        const double r1 = 0.5 * (std::norm(rp[k]) + std::norm(rq[k]));
        const cplx x = rp[k] * std::conj(rq[k]);
        s.num += x.imag() * (r1 - 1.0);
        s.den += x.real() * (r1 - 1.0);
    }
    return s;
}

// Reduced statistics r~ = [r1, cos(b) r2 + sin(b) r3].
void reduced_moments(RowView rp, RowView rq, double beta, RealSym2& r_mat, Vec<2>& r) {
    const double cb = std::cos(beta), sb = std::sin(beta);
    r_mat = RealSym2{};
    r = Vec<2>{};
    for (std::size_t k = 0; k < rp.size(); ++k) {
        const double r1 = 0.5 * (std::norm(rp[k]) + std::norm(rq[k]));
        const cplx x = rp[k] * std::conj(rq[k]);
        const Vec<2> rt{r1, cb * x.real() + sb * x.imag()};
        r_mat.add_outer(rt);
        r = r + rt;
    }
}

ShearParams from_reduced(std::size_t p, std::size_t q, const Vec<2>& u, double beta) {
    ShearParams h;
    h.p = p;
    h.q = q;
    h.ch = std::sqrt(0.5 * (u[0] + 1.0));
    h.sh = std::polar(u[1] / (2.0 * h.ch), beta);
    return h;
}

}  // namespace

ShearParams ShearParams::from_angles(std::size_t p, std::size_t q, double gamma, double beta) {
    ShearParams h;
    h.p = p;
    h.q = q;
    h.ch = std::cosh(gamma);
    h.sh = std::polar(std::sinh(gamma), beta);
    return h;
}

ShearParams ShearParams::from_u(std::size_t p, std::size_t q, const Vec<3>& u) {
    ShearParams h;
    h.p = p;
    h.q = q;
    h.ch = std::sqrt(0.5 * (u[0] + 1.0));
    h.sh = cplx{u[1], u[2]} / (2.0 * h.ch);
    return h;
}

double ShearParams::gamma() const {
    const double mag = std::asinh(std::abs(sh));
    if (sh.real() < 0.0) return -mag;
    if (sh.real() == 0.0 && sh.imag() < 0.0) return -mag;
    return mag;
}

double ShearParams::beta() const {
    if (sh.real() == 0.0) return sh.imag() == 0.0 ? 0.0 : std::numbers::pi / 2.0;
    return std::atan(sh.imag() / sh.real());
}

RealSym3 givens_matrix(RowView rp, RowView rq) {
    check_rows(rp, rq);
    RealSym3 t;
    for (std::size_t k = 0; k < rp.size(); ++k) {
        const cplx x = rp[k] * std::conj(rq[k]);
        t.add_outer(Vec<3>{0.5 * (std::norm(rp[k]) - std::norm(rq[k])), x.real(), x.imag()});
    }
    return t;
}

ShearMoments shear_moments(RowView rp, RowView rq) {
    check_rows(rp, rq);
    ShearMoments m;
    for (std::size_t k = 0; k < rp.size(); ++k) {
        const cplx x = rp[k] * std::conj(rq[k]);
        const Vec<3> rj{0.5 * (std::norm(rp[k]) + std::norm(rq[k])), x.real(), x.imag()};
        m.r_mat.add_outer(rj);
        m.r = m.r + rj;
    }
    return m;
}

double shear_objective(const ShearMoments& m, const Vec<3>& u) {
    return hyperbolic_objective(m.r_mat, m.r, u);
}

double shear_phase(RowView rp, RowView rq) {
    check_rows(rp, rq);
    return phase_from(phase_sums(rp, rq));
}

GivensParams givens_params(RowView rp, RowView rq, std::size_t p, std::size_t q) {
    const RealSym3 t = givens_matrix(rp, rq);
    const SymEig<3> e = eig_sym3(t);
    const double tol = 1e-12 * std::max(1.0, std::fabs(e.values[2]));

    // Projection of e1 onto the minimal eigenspace.
    Vec<3> v{};
    for (std::size_t k = 0; k < 3; ++k) {
        if (e.values[k] > e.values[0] + tol) break;
        const Vec<3> col = e.vectors.column(k);
        v = v + col[0] * col;
    }
    const double n = norm(v);
    if (n > 1e-12) {
        v = (1.0 / n) * v;
    } else {
        v = e.vectors.column(0);
        if (v[0] < 0.0) v = -1.0 * v;
    }

    GivensParams g;
    g.p = p;
    g.q = q;
    const double onev = std::max(0.0, 1.0 + v[0]);
    g.c = std::sqrt(0.5 * onev);
    if (onev > 0.0) g.s = cplx{v[1], v[2]} / std::sqrt(2.0 * onev);
    else g.s = cplx{v[1], v[2]} / std::abs(cplx{v[1], v[2]});
    // Renormalize so c^2 + |s|^2 = 1 holds to rounding.
    const double scale = std::sqrt(g.c * g.c + std::norm(g.s));
    g.c /= scale;
    g.s /= scale;
    return g;
}

ShearParams shear_linear(RowView rp, RowView rq, std::size_t p, std::size_t q, ShearDiagnostics* diag) {
    check_rows(rp, rq);
    const double beta = phase_from(phase_sums(rp, rq));
    RealSym2 rr;
    Vec<2> r;
    reduced_moments(rp, rq, beta, rr, r);
    // tanh(2 gamma) = (r2 - R12) / (R11 + R22 - r1)
    const double num = r[1] - rr(0, 1);
    const double den = rr(0, 0) + rr(1, 1) - r[0];

    bool clamped = false;
    double gamma = 0.0;
    if (num != 0.0) {
        const double ratio = den > 0.0 ? num / den : 0.0;
        if (den > 0.0 && std::fabs(ratio) < 1.0) {
            gamma = 0.5 * std::atanh(ratio);
            if (std::fabs(gamma) > kGammaCap) {
                gamma = std::copysign(kGammaCap, gamma);
                clamped = true;
            }
        } else {
            // The linearized stationarity equation has no solution in range
            // (nonpositive curvature or |tanh| >= 1): leave the pair unsheared.
            clamped = true;
        }
    }
    if (diag) {
        *diag = ShearDiagnostics{};
        diag->used = ShearVariant::Linear;
        diag->clamped = clamped;
    }
    return ShearParams::from_angles(p, q, gamma, beta);
}

ShearParams shear_semi_exact(RowView rp, RowView rq, std::size_t p, std::size_t q, ShearDiagnostics* diag) {
    check_rows(rp, rq);
    const double beta = phase_from(phase_sums(rp, rq));
    RealSym2 r_mat;
    Vec<2> r;
    reduced_moments(rp, rq, beta, r_mat, r);
    const auto best = minimize_on_hyperbola<2>(r_mat, r);
    if (!best) {
        ShearParams h = shear_linear(rp, rq, p, q, diag);
        if (diag) diag->fallback = true;
        return h;
    }
    ShearDiagnostics d;
    d.used = ShearVariant::SemiExact;
    d.lambda = best->lambda;
    d.poly_residual = best->poly_residual;
    d.constraint_residual = best->constraint_residual;
    d.singular_shift = best->singular_shift;
    ShearParams h = from_reduced(p, q, best->u, beta);
    const double at_identity = r_mat(0, 0) - 2.0 * r[0];
    if (best->objective > at_identity) {
        h = ShearParams{p, q, 1.0, cplx{}};
        d.identity_guard = true;
    }
    if (diag) *diag = d;
    return h;
}

ShearParams shear_exact(RowView rp, RowView rq, std::size_t p, std::size_t q, ShearDiagnostics* diag) {
    const ShearMoments m = shear_moments(rp, rq);
    const auto best = minimize_on_hyperbola<3>(m.r_mat, m.r);
    if (!best) {
        ShearParams h = shear_semi_exact(rp, rq, p, q, diag);
        if (diag) diag->fallback = true;
        return h;
    }
    ShearDiagnostics d;
    d.used = ShearVariant::Exact;
    d.lambda = best->lambda;
    d.poly_residual = best->poly_residual;
    d.constraint_residual = best->constraint_residual;
    d.singular_shift = best->singular_shift;
    ShearParams h = ShearParams::from_u(p, q, best->u);
    const double at_identity = m.r_mat(0, 0) - 2.0 * m.r[0];
    if (best->objective > at_identity) {
        h = ShearParams{p, q, 1.0, cplx{}};
        d.identity_guard = true;
    }
    if (diag) *diag = d;
    return h;
}

ShearParams shear_params(ShearVariant variant, RowView rp, RowView rq, std::size_t p, std::size_t q,
                         ShearDiagnostics* diag) {
    switch (variant) {
        case ShearVariant::Exact: return shear_exact(rp, rq, p, q, diag);
        case ShearVariant::SemiExact: return shear_semi_exact(rp, rq, p, q, diag);
        case ShearVariant::Linear: break;
    }
    return shear_linear(rp, rq, p, q, diag);
}

double norm_param(RowView row, bool* degenerate) {
    double s2 = 0.0, s4 = 0.0;
    for (const cplx& y : row) {
        const double a = std::norm(y);
        s2 += a;
        s4 += a * a;
    }
    const bool zero = !(s4 > 0.0) || !std::isfinite(s2 / s4);
    if (degenerate) *degenerate = zero;
    return zero ? 1.0 : std::sqrt(s2 / s4);
}

NormParams norm_params(RowView rp, RowView rq, std::size_t p, std::size_t q) {
    return NormParams{p, q, norm_param(rp), norm_param(rq)};
}

std::array<cplx, 4> action_matrix(const GivensParams& g) {
    return {cplx{g.c}, g.s, -std::conj(g.s), cplx{g.c}};
}

std::array<cplx, 4> action_matrix(const ShearParams& h) {
    return {cplx{h.ch}, h.sh, std::conj(h.sh), cplx{h.ch}};
}

namespace {

void apply_action(const std::array<cplx, 4>& a, std::size_t p, std::size_t q, ComplexBlock& block) {
    check_pair(p, q, block.rows());
    auto rp = block.row(p);
    auto rq = block.row(q);
    for (std::size_t k = 0; k < rp.size(); ++k) {
        const cplx x = rp[k], y = rq[k];
        rp[k] = a[0] * x + a[1] * y;
        rq[k] = a[2] * x + a[3] * y;
    }
}

}  // namespace

void apply_two_row(const GivensParams& g, ComplexBlock& block) {
    apply_action(action_matrix(g), g.p, g.q, block);
}

void apply_two_row(const ShearParams& h, ComplexBlock& block) {
    apply_action(action_matrix(h), h.p, h.q, block);
}

void apply_norm(const NormParams& n, ComplexBlock& block) {
    check_pair(n.p, n.q, block.rows());
    for (cplx& v : block.row(n.p)) v *= n.lambda_p;
    for (cplx& v : block.row(n.q)) v *= n.lambda_q;
}

void apply_row_scaling(std::span<const double> scales, ComplexBlock& block) {
    if (scales.size() != block.rows()) throw Error(ErrorCode::DimensionMismatch, "row scaling length differs from row count");
    for (std::size_t i = 0; i < scales.size(); ++i)
        for (cplx& v : block.row(i)) v *= scales[i];
}

}  // namespace hgcma
