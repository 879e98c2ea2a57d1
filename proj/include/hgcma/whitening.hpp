// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "hgcma/block.hpp"

namespace hgcma {

/// Prewhitening / signal-subspace projection B = diag(l)^{-1/2} U^H built
/// from the M dominant eigenpairs of the sample covariance (1/K) Y Y^H.
struct Whitener {
    ComplexBlock matrix;               // M x N
    std::vector<double> retained;      // M largest covariance eigenvalues, descending
};

/// Throws Error(DegenerateCovariance) when fewer than M eigenvalues exceed
/// 1e-12 * trace, Error(InvalidInput) when K < M or M > N.
Whitener fit_whitener(const ComplexBlock& y, std::size_t m);

/// B Y. Throws Error(DimensionMismatch) on shape mismatch.
ComplexBlock whiten(const Whitener& w, const ComplexBlock& y);

/// (1/K) Y Y^H.
ComplexBlock sample_covariance(const ComplexBlock& y);

}  // namespace hgcma
