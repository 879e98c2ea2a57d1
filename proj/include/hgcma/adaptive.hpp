// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hgcma/block.hpp"

namespace hgcma {

enum class RotationStrategy {
    FullSweep,        // every pair p < q per step
    SingleAuto,       // one pair per step from a cyclic cursor
    TwoMaxDeviation,  // the max-deviation pair plus the cursor pair
};

/// Sliding-window HG-CMA for square (M x M) input.
struct AdaptiveState {
    std::size_t m = 0;
    std::size_t k = 0;               // window length
    ComplexBlock w;                  // M x M
    ComplexBlock window;             // M x K, oldest column first; transformed samples
    std::size_t filled = 0;          // columns ingested so far, saturates at K
    std::size_t t = 0;               // samples processed
    std::size_t cursor = 0;          // index into the lexicographic pair list
    RotationStrategy strategy = RotationStrategy::TwoMaxDeviation;

    double last_cost = 0.0;          // window CM cost after the last step
    std::size_t last_rotations = 0;  // pairs visited in the last step
    std::size_t total_rotations = 0;
    std::size_t clamps = 0;
    std::size_t degenerate_norms = 0;
};

/// W = I, or w0 when given. Throws Error(InvalidInput) for K < 2, M < 1, or
/// a w0 that is not M x M.
AdaptiveState adaptive_init(std::size_t m, std::size_t k, RotationStrategy strategy,
                            const std::optional<ComplexBlock>& w0 = std::nullopt);

/// Processes one sample and returns the separated output: the newest window
/// column after this step's rotations and normalization. While the window
/// fills, the output is W y and nothing is rotated. Throws
/// Error(InvalidInput) on a non-finite or wrongly sized sample, leaving the
/// state untouched.
std::vector<cplx> adaptive_step(AdaptiveState& state, std::span<const cplx> y);

/// Pair (p, q), p < q, maximizing the summed row deviations
/// sum_k (|y_pk|^2 - 1)^2 + (|y_qk|^2 - 1)^2; ties go to the
/// lexicographically smallest pair. Requires at least two rows.
std::pair<std::size_t, std::size_t> select_max_deviation(const ComplexBlock& window);

/// Pairs p < q in lexicographic order.
std::vector<std::pair<std::size_t, std::size_t>> pair_schedule(std::size_t m);

}  // namespace hgcma
