// SPDX-License-Identifier: Apache-2.0
#include "hgcma/block.hpp"

#include <algorithm>
#include <cmath>

#include "hgcma/error.hpp"

namespace hgcma {

ComplexBlock::ComplexBlock(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw Error(ErrorCode::DimensionMismatch, "ComplexBlock: data size mismatch");
}

ComplexBlock ComplexBlock::identity(std::size_t n) {
    ComplexBlock b(n, n);
    for (std::size_t i = 0; i < n; ++i) b(i, i) = 1.0;
    return b;
}

std::vector<cplx> ComplexBlock::column(std::size_t j) const {
    std::vector<cplx> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

void ComplexBlock::set_column(std::size_t j, std::span<const cplx> v) {
    if (v.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "set_column: length mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexBlock ComplexBlock::adjoint() const {
    ComplexBlock t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

double ComplexBlock::frobenius() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexBlock::all_finite() const {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

ComplexBlock operator*(const ComplexBlock& a, const ComplexBlock& b) {
    if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
    ComplexBlock c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto out = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{}) continue;
            const auto brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
        }
    }
    return c;
}

namespace {

void require_same_shape(const ComplexBlock& a, const ComplexBlock& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": shape mismatch");
}

}  // namespace

ComplexBlock operator+(const ComplexBlock& a, const ComplexBlock& b) {
    require_same_shape(a, b, "matrix sum");
    ComplexBlock c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

ComplexBlock operator-(const ComplexBlock& a, const ComplexBlock& b) {
    require_same_shape(a, b, "matrix difference");
    ComplexBlock c = a;
    for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

ComplexBlock operator*(cplx s, const ComplexBlock& a) {
    ComplexBlock c = a;
    for (cplx& z : c.data()) z *= s;
    return c;
}

ComplexBlock solve_hpd(const ComplexBlock& h, const ComplexBlock& b) {
    const std::size_t n = h.rows();
    if (h.cols() != n || b.rows() != n) throw Error(ErrorCode::DimensionMismatch, "solve_hpd: shape mismatch");

    // H = L L^H
    ComplexBlock l(n, n);
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, h(i, i).real());
    for (std::size_t j = 0; j < n; ++j) {
        double d = h(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 1e-14 * max_diag)) throw Error(ErrorCode::SingularSystem, "solve_hpd: matrix is not positive definite");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cplx s = h(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }

    ComplexBlock x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            cplx s = x(i, c);
            for (std::size_t k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * x(k, c);
            x(i, c) = s / l(i, i);
        }
    }
    return x;
}

}  // namespace hgcma
