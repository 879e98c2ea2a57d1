// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "hgcma/small_matrix.hpp"

namespace hgcma {

/// Diagonal matrix of +/-1 entries defining the hyperbolic form u^T J u.
template <std::size_t N>
struct SignatureMatrix {
    std::array<int, N> diag{};

    /// diag(1, -1, ..., -1): J2 and J3 of the Shear constraint.
    static SignatureMatrix hyperbolic() {
        SignatureMatrix j;
        j.diag.fill(-1);
        j.diag[0] = 1;
        return j;
    }

    Vec<N> apply(Vec<N> v) const {
        for (std::size_t i = 0; i < N; ++i) v[i] *= diag[i];
        return v;
    }

    double form(const Vec<N>& u) const { return dot(u, apply(u)); }
};

/// Eigen-decomposition of a real symmetric matrix: ascending eigenvalues and
/// orthonormal eigenvectors stored as the columns of `vectors`.
template <std::size_t N>
struct SymEig {
    Vec<N> values{};
    Mat<N> vectors{};
};

/// Cyclic Jacobi on an N x N symmetric matrix (N = 2 or 3). Ties keep the
/// input coordinate order, so a multiple of the identity yields I.
/// Throws Error(InvalidInput) on non-finite entries.
template <std::size_t N>
SymEig<N> eig_sym(const SymMat<N>& m);

inline SymEig<3> eig_sym3(const RealSym3& t) { return eig_sym<3>(t); }

/// Generalized eigenpairs of the pencil (R, J): R U = J U diag(lambda),
/// equivalently R = J U diag(lambda) U^-1. Eigenvalues are sorted descending,
/// columns of U have unit norm with their largest-magnitude entry positive.
template <std::size_t N>
struct GenEigPair {
    Mat<N> vectors{};
    Vec<N> values{};
};

/// Throws Error(DegeneratePencil) when J R has complex eigenvalues or is not
/// diagonalizable to working accuracy.
template <std::size_t N>
GenEigPair<N> gen_eig(const SymMat<N>& r, const SignatureMatrix<N>& j);

/// Solves (R + lambda J) u = r. Throws Error(SingularShift) when the shifted
/// matrix has condition number above 1e12.
template <std::size_t N>
Vec<N> solve_shifted(const SymMat<N>& r_mat, const SignatureMatrix<N>& j, double lambda, const Vec<N>& rhs);

/// Gaussian elimination with partial pivoting and one refinement step.
/// Throws Error(SingularSystem) on an exactly singular pivot.
template <std::size_t N>
Vec<N> solve(const Mat<N>& a, const Vec<N>& b);

template <std::size_t N>
Mat<N> inverse(const Mat<N>& a);

inline constexpr double kShiftConditionLimit = 1e12;

// Hermitian eigen-decomposition for the n x n covariance matrices of the
// whitening stage. Storage is row-major, n*n entries.
struct HermitianEig {
    std::vector<double> values;                 // ascending
    std::vector<std::complex<double>> vectors;  // row-major n x n, eigenvectors in columns
};

/// Complex cyclic Jacobi. Throws Error(InvalidInput) if the input is not
/// square, not finite, or not Hermitian to 1e-10 relative.
HermitianEig eig_hermitian(std::size_t n, const std::vector<std::complex<double>>& h);

}  // namespace hgcma
