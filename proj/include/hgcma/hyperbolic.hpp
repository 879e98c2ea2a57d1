// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>

#include "hgcma/linalg.hpp"
#include "hgcma/poly.hpp"

namespace hgcma {

/// Minimizer of u^T R u - 2 r^T u over the upper sheet {u^T J u = 1, u_0 >= 1}
/// of the hyperbolic form J = diag(1, -1, ...), D = 2 or 3.
template <std::size_t D>
struct HyperbolicMinimum {
    Vec<D> u{};                       // on the sheet
    double lambda = 0.0;              // Lagrange multiplier: (R + lambda J) u = r
    double objective = 0.0;           // at u
    bool singular_shift = false;      // found on the branch where R + lambda J is singular
    double poly_residual = 0.0;       // |P(lambda)| / (max|c_i| max(1,|lambda|)^deg)
    double constraint_residual = 0.0; // |u^T J u - 1| / max(1, |u|^2), before projection onto the sheet
};

/// Degree-2D polynomial whose real roots contain every Lagrange multiplier:
///   prod_i (x + l_i)^2 - sum_i a_i b_i prod_{k != i} (x + l_k)^2
/// with (l, U) = gen_eig(R, J), a = U^T r, b = U^-1 J r.
template <std::size_t D>
PolyReal lagrange_polynomial(const GenEigPair<D>& pencil, const Vec<D>& r);

template <std::size_t D>
double hyperbolic_objective(const SymMat<D>& r_mat, const Vec<D>& r, const Vec<D>& u);

/// Lifts u onto the upper sheet by recomputing u_0 = sqrt(1 + sum_{i>0} u_i^2).
template <std::size_t D>
Vec<D> project_to_sheet(Vec<D> u);

/// Candidates are the real roots of lagrange_polynomial with a nonsingular
/// shift (refined by Newton on u(l)^T J u(l) = 1), plus, for each generalized
/// eigenvalue mu, the points u_p + t n on the sheet when (R - mu J) u = r is
/// consistent with null direction n. The candidate with the lowest objective
/// wins. Returns nullopt for a degenerate pencil or when no candidate lies
/// on the upper sheet.
template <std::size_t D>
std::optional<HyperbolicMinimum<D>> minimize_on_hyperbola(const SymMat<D>& r_mat, const Vec<D>& r);

}  // namespace hgcma
