// SPDX-License-Identifier: Apache-2.0
#include "hgcma/separators.hpp"

#include <cmath>

#include "hgcma/error.hpp"
#include "hgcma/linalg.hpp"
#include "hgcma/signal.hpp"
#include "hgcma/whitening.hpp"

namespace hgcma {

namespace {

void check_config(const SeparatorConfig& config) {
    if (config.sweeps == 0) throw Error(ErrorCode::Config, "sweeps must be at least 1");
    if (!(config.epsilon >= 0.0)) throw Error(ErrorCode::Config, "epsilon must be nonnegative");
}

void check_input(const ComplexBlock& y, std::size_t m, std::size_t min_k) {
    if (m == 0 || y.rows() < m) throw Error(ErrorCode::InvalidInput, "need 1 <= M <= N");
    if (y.cols() < min_k) throw Error(ErrorCode::InvalidInput, "too few samples");
    if (!y.all_finite()) throw Error(ErrorCode::InvalidInput, "non-finite samples");
}

template <typename Visit>
void sweep_pairs(SeparatorState& st, const SeparatorConfig& config, Visit visit) {
    const std::size_t m = st.work.rows();
    double before = cm_cost(st.work);
    if (config.record_trace) st.cost_trace.push_back(before);
    for (std::size_t s = 0; s < config.sweeps; ++s) {
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = p + 1; q < m; ++q) {
                visit(p, q);
                ++st.rotations;
                if (config.record_trace) st.cost_trace.push_back(cm_cost(st.work));
            }
        ++st.sweeps;
        if (config.epsilon > 0.0) {
            const double after = cm_cost(st.work);
            if (before - after < config.epsilon) break;
            before = after;
        }
    }
}

// U_M^H: rows are the conjugated dominant eigenvectors.
ComplexBlock subspace_projector(const ComplexBlock& y, std::size_t m) {
    const Whitener wh = fit_whitener(y, m);
    ComplexBlock p = wh.matrix;
    for (std::size_t i = 0; i < m; ++i) {
        const double s = std::sqrt(wh.retained[i]);
        for (cplx& v : p.row(i)) v *= s;
    }
    return p;
}

}  // namespace

SeparatorState run_gcma(const ComplexBlock& y, std::size_t m, const SeparatorConfig& config) {
    check_config(config);
    check_input(y, m, m);
    const Whitener wh = fit_whitener(y, m);

    SeparatorState st;
    st.work = whiten(wh, y);
    ComplexBlock v = ComplexBlock::identity(m);
    sweep_pairs(st, config, [&](std::size_t p, std::size_t q) {
        const GivensParams g = givens_params(st.work.row(p), st.work.row(q), p, q);
        apply_two_row(g, st.work);
        apply_two_row(g, v);
    });
    st.w = v * wh.matrix;
    return st;
}

SeparatorState run_hgcma(const ComplexBlock& y, std::size_t m, const SeparatorConfig& config) {
    check_config(config);
    check_input(y, m, 2);

    SeparatorState st;
    switch (config.preprocess) {
        case Preprocess::Whiten: st.w = fit_whitener(y, m).matrix; break;
        case Preprocess::Project: st.w = subspace_projector(y, m); break;
        case Preprocess::None:
            if (y.rows() != m) throw Error(ErrorCode::Config, "raw HG-CMA input requires N == M");
            st.w = ComplexBlock::identity(m);
            break;
    }
    st.work = config.preprocess == Preprocess::None ? y : st.w * y;
    sweep_pairs(st, config, [&](std::size_t p, std::size_t q) {
        ShearDiagnostics diag;
        const ShearParams h = shear_params(config.variant, st.work.row(p), st.work.row(q), p, q, &diag);
        if (diag.fallback) ++st.counters.fallbacks;
        if (diag.clamped) ++st.counters.clamps;
        if (diag.identity_guard) ++st.counters.identity_guards;
        apply_two_row(h, st.work);
        apply_two_row(h, st.w);

        const GivensParams g = givens_params(st.work.row(p), st.work.row(q), p, q);
        apply_two_row(g, st.work);
        apply_two_row(g, st.w);

        bool zp = false, zq = false;
        const NormParams n{p, q, norm_param(st.work.row(p), &zp), norm_param(st.work.row(q), &zq)};
        st.counters.degenerate_norms += static_cast<std::size_t>(zp) + static_cast<std::size_t>(zq);
        apply_norm(n, st.work);
        apply_norm(n, st.w);
    });
    return st;
}

SeparatorState run_lscma(const ComplexBlock& y, std::size_t m, std::size_t iters) {
    if (iters == 0) throw Error(ErrorCode::Config, "iterations must be at least 1");
    check_input(y, m, m);

    SeparatorState st;
    st.w = fit_whitener(y, m).matrix;
    const ComplexBlock yh = y.adjoint();
    const ComplexBlock gram = y * yh;
    st.work = st.w * y;
    st.cost_trace.push_back(cm_cost(st.work));
    for (std::size_t it = 0; it < iters; ++it) {
        ComplexBlock target = st.work;
        for (cplx& z : target.data()) {
            const double a = std::abs(z);
            z = a > 0.0 ? z / a : cplx{};
        }
        // W^H = (Y Y^H)^-1 Y S^H
        ComplexBlock next = solve_hpd(gram, y * target.adjoint()).adjoint();
        const double change = (next - st.w).frobenius();
        const double size = st.w.frobenius();
        st.w = std::move(next);
        st.work = st.w * y;
        ++st.rotations;
        st.cost_trace.push_back(cm_cost(st.work));
        if (change < 1e-8 * size) break;
    }
    st.sweeps = st.rotations;
    return st;
}

}  // namespace hgcma
