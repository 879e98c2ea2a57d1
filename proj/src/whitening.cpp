// SPDX-License-Identifier: Apache-2.0
#include "hgcma/whitening.hpp"

#include <cmath>

#include "hgcma/error.hpp"
#include "hgcma/linalg.hpp"

namespace hgcma {

ComplexBlock sample_covariance(const ComplexBlock& y) {
    const std::size_t n = y.rows();
    const double inv_k = 1.0 / static_cast<double>(y.cols());
    ComplexBlock c(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            cplx acc{};
            const auto ri = y.row(i);
            const auto rj = y.row(j);
            for (std::size_t t = 0; t < ri.size(); ++t) acc += ri[t] * std::conj(rj[t]);
            acc *= inv_k;
            c(i, j) = acc;
            c(j, i) = std::conj(acc);
        }
        c(i, i) = c(i, i).real();
    }
    return c;
}

Whitener fit_whitener(const ComplexBlock& y, std::size_t m) {
    const std::size_t n = y.rows();
    if (m == 0 || m > n) throw Error(ErrorCode::InvalidInput, "fit_whitener: requires 1 <= M <= N");
    if (y.cols() < m) throw Error(ErrorCode::InvalidInput, "fit_whitener: requires K >= M");
    if (!y.all_finite()) throw Error(ErrorCode::InvalidInput, "fit_whitener: non-finite samples");

    const ComplexBlock cov = sample_covariance(y);
    const HermitianEig eig = eig_hermitian(n, {cov.data().begin(), cov.data().end()});
    double trace = 0.0;
    for (double v : eig.values) trace += v;

    Whitener w;
    w.matrix = ComplexBlock(m, n);
    w.retained.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t col = n - 1 - k;  // eigenvalues are ascending
        const double lambda = eig.values[col];
        if (!(lambda > 1e-12 * trace))
            throw Error(ErrorCode::DegenerateCovariance, "fit_whitener: covariance has fewer than M significant eigenvalues");
        w.retained[k] = lambda;
        const double s = 1.0 / std::sqrt(lambda);
        for (std::size_t i = 0; i < n; ++i) w.matrix(k, i) = s * std::conj(eig.vectors[i * n + col]);
    }
    return w;
}

ComplexBlock whiten(const Whitener& w, const ComplexBlock& y) {
    if (w.matrix.cols() != y.rows()) throw Error(ErrorCode::DimensionMismatch, "whiten: Y rows do not match B columns");
    return w.matrix * y;
}

}  // namespace hgcma
