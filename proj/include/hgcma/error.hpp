// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hgcma {

enum class ErrorCode {
    InvalidInput,
    DimensionMismatch,
    DegeneratePencil,
    SingularShift,
    DegenerateCovariance,
    SingularSystem,
    Config,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace hgcma
