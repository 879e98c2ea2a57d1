// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include "hgcma/block.hpp"
#include "hgcma/rotations.hpp"

namespace hgcma {

/// Input stage of HG-CMA.
enum class Preprocess {
    Whiten,   // the whitener diag(l)^{-1/2} U_M^H
    Project,  // U_M^H: dominant eigenvectors of the sample covariance, no rescaling
    None,     // raw data, W starts at I; requires N == M
};

struct SeparatorConfig {
    std::size_t sweeps = 10;
    ShearVariant variant = ShearVariant::Linear;
    bool record_trace = true;
    /// Stop early once a sweep lowers the cost by less than epsilon; 0 runs every sweep.
    double epsilon = 0.0;
    Preprocess preprocess = Preprocess::Whiten;
};

struct SolverCounters {
    std::size_t fallbacks = 0;
    std::size_t clamps = 0;
    std::size_t identity_guards = 0;
    std::size_t degenerate_norms = 0;
};

struct SeparatorState {
    ComplexBlock w;                 // M x N
    ComplexBlock work;              // M x K, equals w * Y
    std::vector<double> cost_trace; // cost before the first pair, then after every pair visit (or iteration)
    std::size_t rotations = 0;      // pair visits (LS-CMA: iterations)
    std::size_t sweeps = 0;
    SolverCounters counters;
};

/// Whitening, then lexicographic Givens sweeps. Throws on whitening failure.
SeparatorState run_gcma(const ComplexBlock& y, std::size_t m, const SeparatorConfig& config = {});

/// Per pair: Shear (configured solver), Givens, then normalization of rows p and q.
SeparatorState run_hgcma(const ComplexBlock& y, std::size_t m, const SeparatorConfig& config = {});

/// W <- S^ Y^H (Y Y^H)^-1 with S^ the unit-modulus projection of W Y,
/// starting from the whitener. Stops after `iters` iterations or when
/// |dW|_F < 1e-8 |W|_F. Throws Error(SingularSystem) for rank-deficient Y.
SeparatorState run_lscma(const ComplexBlock& y, std::size_t m, std::size_t iters);

}  // namespace hgcma
