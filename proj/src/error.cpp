#include "idinf/error.hpp"

namespace idinf {

const char* error_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OddDimension: return "OddDimension";
    case ErrorCode::NotAComplexStructure: return "NotAComplexStructure";
    case ErrorCode::ZeroRoot: return "ZeroRoot";
    case ErrorCode::UnpairedFactor: return "UnpairedFactor";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::CondBoundUnreachable: return "CondBoundUnreachable";
    case ErrorCode::NotQuaternionCase: return "NotQuaternionCase";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

}  // namespace idinf
