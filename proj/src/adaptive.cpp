// SPDX-License-Identifier: Apache-2.0
#include "hgcma/adaptive.hpp"

#include <cmath>

#include "hgcma/error.hpp"
#include "hgcma/rotations.hpp"
#include "hgcma/signal.hpp"

namespace hgcma {

std::vector<std::pair<std::size_t, std::size_t>> pair_schedule(std::size_t m) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = p + 1; q < m; ++q) pairs.emplace_back(p, q);
    return pairs;
}

AdaptiveState adaptive_init(std::size_t m, std::size_t k, RotationStrategy strategy,
                            const std::optional<ComplexBlock>& w0) {
    if (m == 0) throw Error(ErrorCode::InvalidInput, "adaptive: M must be at least 1");
    if (k < 2) throw Error(ErrorCode::InvalidInput, "adaptive: window length must be at least 2");
    AdaptiveState st;
    st.m = m;
    st.k = k;
    st.strategy = strategy;
    if (w0) {
        if (w0->rows() != m || w0->cols() != m) throw Error(ErrorCode::InvalidInput, "adaptive: W0 must be M x M");
        if (!w0->all_finite()) throw Error(ErrorCode::InvalidInput, "adaptive: W0 is not finite");
        st.w = *w0;
    } else {
        st.w = ComplexBlock::identity(m);
    }
    st.window = ComplexBlock(m, k);
    return st;
}

std::pair<std::size_t, std::size_t> select_max_deviation(const ComplexBlock& window) {
    const std::size_t m = window.rows();
    if (m < 2) throw Error(ErrorCode::InvalidInput, "max deviation: need at least two rows");
    std::vector<double> dev(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (const cplx& v : window.row(i)) {
            const double d = std::norm(v) - 1.0;
            dev[i] += d * d;
        }
    std::pair<std::size_t, std::size_t> best{0, 1};
    double best_v = dev[0] + dev[1];
    for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = p + 1; q < m; ++q)
            if (dev[p] + dev[q] > best_v) {
                best_v = dev[p] + dev[q];
                best = {p, q};
            }
    return best;
}

std::vector<cplx> adaptive_step(AdaptiveState& st, std::span<const cplx> y) {
    if (y.size() != st.m) throw Error(ErrorCode::InvalidInput, "adaptive: sample length differs from M");
    for (const cplx& v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error(ErrorCode::InvalidInput, "adaptive: non-finite sample");

    const std::size_t m = st.m, k = st.k;
    std::vector<cplx> z(m);
    for (std::size_t i = 0; i < m; ++i) {
        cplx acc{};
        const auto wr = st.w.row(i);
        for (std::size_t j = 0; j < m; ++j) acc += wr[j] * y[j];
        z[i] = acc;
    }
    ++st.t;
    st.last_rotations = 0;

    if (st.filled < k) {
        st.window.set_column(st.filled, z);
        ++st.filled;
        st.last_cost = cm_cost(st.window);
        return z;
    }

    for (std::size_t i = 0; i < m; ++i) {
        auto row = st.window.row(i);
        for (std::size_t j = 0; j + 1 < k; ++j) row[j] = row[j + 1];
        row[k - 1] = z[i];
    }

    if (m >= 2) {
        const auto pairs = pair_schedule(m);
        std::vector<std::pair<std::size_t, std::size_t>> chosen;
        switch (st.strategy) {
            case RotationStrategy::FullSweep: chosen = pairs; break;
            case RotationStrategy::SingleAuto:
                chosen.push_back(pairs[st.cursor]);
                st.cursor = (st.cursor + 1) % pairs.size();
                break;
            case RotationStrategy::TwoMaxDeviation: {
                const auto dev = select_max_deviation(st.window);
                chosen.push_back(dev);
                if (pairs[st.cursor] == dev && pairs.size() > 1) st.cursor = (st.cursor + 1) % pairs.size();
                if (pairs[st.cursor] != dev) chosen.push_back(pairs[st.cursor]);
                st.cursor = (st.cursor + 1) % pairs.size();
                break;
            }
        }
        for (const auto& [p, q] : chosen) {
            ShearDiagnostics diag;
            const ShearParams h = shear_linear(st.window.row(p), st.window.row(q), p, q, &diag);
            if (diag.clamped) ++st.clamps;
            apply_two_row(h, st.window);
            apply_two_row(h, st.w);
            const GivensParams g = givens_params(st.window.row(p), st.window.row(q), p, q);
            apply_two_row(g, st.window);
            apply_two_row(g, st.w);
        }
        st.last_rotations = chosen.size();
        st.total_rotations += chosen.size();
    }

    std::vector<double> scales(m);
    for (std::size_t i = 0; i < m; ++i) {
        bool zero = false;
        scales[i] = norm_param(st.window.row(i), &zero);
        if (zero) ++st.degenerate_norms;
    }
    apply_row_scaling(scales, st.window);
    apply_row_scaling(scales, st.w);

    st.last_cost = cm_cost(st.window);
    return st.window.column(k - 1);
}

}  // namespace hgcma
