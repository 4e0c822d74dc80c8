#pragma once

#include <stdexcept>
#include <string>

namespace idinf {

enum class ErrorCode {
    InvalidMatrix,
    SingularMatrix,
    DimensionMismatch,
    OddDimension,
    NotAComplexStructure,
    ZeroRoot,
    UnpairedFactor,
    NumericalFailure,
    CondBoundUnreachable,
    NotQuaternionCase,
    InvalidSpec,
    InvalidInput,
};

/// Stable identifier used in CLI error objects, e.g. "NotAComplexStructure".
const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace idinf
