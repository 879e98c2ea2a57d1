// SPDX-License-Identifier: Apache-2.0
#include "hgcma/error.hpp"

namespace hgcma {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidInput: return "invalid_input";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::DegeneratePencil: return "degenerate_pencil";
        case ErrorCode::SingularShift: return "singular_shift";
        case ErrorCode::DegenerateCovariance: return "degenerate_covariance";
        case ErrorCode::SingularSystem: return "singular_system";
        case ErrorCode::Config: return "config";
        case ErrorCode::Io: return "io";
    }
    return "unknown";
}

}  // namespace hgcma
