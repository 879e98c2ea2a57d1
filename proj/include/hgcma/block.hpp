// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hgcma {

using cplx = std::complex<double>;

/// Dense rows x cols complex matrix, row-major. Holds sample blocks (one
/// row per antenna/output, one column per time sample) as well as small
/// mixing and separation matrices.
class ComplexBlock {
public:
    ComplexBlock() = default;
    ComplexBlock(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    ComplexBlock(std::size_t rows, std::size_t cols, std::vector<cplx> data);

    static ComplexBlock identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<cplx> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<cplx> column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const cplx> v);

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    ComplexBlock adjoint() const;
    double frobenius() const;
    bool all_finite() const;

    friend bool operator==(const ComplexBlock&, const ComplexBlock&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// Throws Error(DimensionMismatch) unless a.cols() == b.rows().
ComplexBlock operator*(const ComplexBlock& a, const ComplexBlock& b);
ComplexBlock operator+(const ComplexBlock& a, const ComplexBlock& b);
ComplexBlock operator-(const ComplexBlock& a, const ComplexBlock& b);
ComplexBlock operator*(cplx s, const ComplexBlock& a);

/// Solves H X = B for Hermitian positive definite H (Cholesky).
/// Throws Error(SingularSystem) when H is not numerically positive definite.
ComplexBlock solve_hpd(const ComplexBlock& h, const ComplexBlock& b);

}  // namespace hgcma
