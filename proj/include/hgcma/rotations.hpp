// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "hgcma/block.hpp"
#include "hgcma/small_matrix.hpp"

namespace hgcma {

using RowView = std::span<const cplx>;

/// Unitary pair rotation [c, s; -conj(s), c] acting on rows (p, q).
struct GivensParams {
    std::size_t p = 0, q = 1;
    double c = 1.0;  // cos(theta) >= 0
    cplx s{};        // e^{j alpha} sin(theta)
};

/// Hermitian unit-determinant pair transform [ch, sh; conj(sh), ch].
struct ShearParams {
    std::size_t p = 0, q = 1;
    double ch = 1.0;  // cosh(gamma)
    cplx sh{};        // e^{j beta} sinh(gamma)

    static ShearParams from_angles(std::size_t p, std::size_t q, double gamma, double beta);
    /// From u = [cosh 2g, cos b sinh 2g, sin b sinh 2g] with u_0 >= 1.
    static ShearParams from_u(std::size_t p, std::size_t q, const Vec<3>& u);

    /// gamma and beta with beta in [-pi/2, pi/2] (gamma carries the sign).
    double gamma() const;
    double beta() const;
};

/// Row scalings of the normalization step.
struct NormParams {
    std::size_t p = 0, q = 1;
    double lambda_p = 1.0;
    double lambda_q = 1.0;
};

enum class ShearVariant { Exact, SemiExact, Linear };

struct ShearDiagnostics {
    ShearVariant used = ShearVariant::Linear;
    bool fallback = false;        // a cheaper solver produced the result
    bool clamped = false;         // linear solver hit the arctanh domain or the gamma cap
    bool identity_guard = false;  // the solver's point was worse than the identity and was discarded
    bool singular_shift = false;  // the winning multiplier made R + lambda J singular
    double lambda = 0.0;
    double poly_residual = 0.0;
    double constraint_residual = 0.0;
};

inline constexpr double kGammaCap = 1.0;

// Pair statistics. For rows p and q with samples (x, y):
//   t = [(|x|^2 - |y|^2)/2, Re(x y*), Im(x y*)]       Givens
//   r = [(|x|^2 + |y|^2)/2, Re(x y*), Im(x y*)]       Shear
RealSym3 givens_matrix(RowView rp, RowView rq);

struct ShearMoments {
    RealSym3 r_mat;  // sum r r^T
    Vec<3> r{};      // sum r
};
ShearMoments shear_moments(RowView rp, RowView rq);

/// Objective of the Shear step up to a constant: u^T R u - 2 r^T u.
double shear_objective(const ShearMoments& m, const Vec<3>& u);

/// The Shear phase in [-pi/2, pi/2]: arctan of
/// sum r3 (r1 - 1) / sum r2 (r1 - 1), with 0/0 -> 0 and x/0 -> sign(x) pi/2.
double shear_phase(RowView rp, RowView rq);

/// Minimizes the pair CM cost over Givens rotations. A degenerate smallest
/// eigenvalue resolves toward the identity.
GivensParams givens_params(RowView rp, RowView rq, std::size_t p = 0, std::size_t q = 1);

ShearParams shear_linear(RowView rp, RowView rq, std::size_t p = 0, std::size_t q = 1,
                         ShearDiagnostics* diag = nullptr);
/// Falls back to shear_linear when no multiplier is admissible.
ShearParams shear_semi_exact(RowView rp, RowView rq, std::size_t p = 0, std::size_t q = 1,
                             ShearDiagnostics* diag = nullptr);
/// Falls back to shear_semi_exact for a degenerate pencil or when no
/// multiplier is admissible.
ShearParams shear_exact(RowView rp, RowView rq, std::size_t p = 0, std::size_t q = 1,
                        ShearDiagnostics* diag = nullptr);

ShearParams shear_params(ShearVariant variant, RowView rp, RowView rq, std::size_t p = 0, std::size_t q = 1,
                         ShearDiagnostics* diag = nullptr);

/// sqrt(sum |y|^2 / sum |y|^4). A zero row gives 1 and sets *degenerate.
double norm_param(RowView row, bool* degenerate = nullptr);

NormParams norm_params(RowView rp, RowView rq, std::size_t p = 0, std::size_t q = 1);

/// Row-major 2x2 action on (row p, row q).
std::array<cplx, 4> action_matrix(const GivensParams& g);
std::array<cplx, 4> action_matrix(const ShearParams& h);

/// In-place left multiplication on rows p and q. Throws Error(InvalidInput)
/// unless p < q < rows.
void apply_two_row(const GivensParams& g, ComplexBlock& block);
void apply_two_row(const ShearParams& h, ComplexBlock& block);
void apply_norm(const NormParams& n, ComplexBlock& block);

/// Scales row i by scales[i].
void apply_row_scaling(std::span<const double> scales, ComplexBlock& block);

}  // namespace hgcma
