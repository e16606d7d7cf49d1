#include "hiercode/error.hpp"

namespace hiercode {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonPrimitivePolynomial: return "NonPrimitivePolynomial";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::IndicatorCollision: return "IndicatorCollision";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::BadShape: return "BadShape";
        case ErrorKind::InvalidParams: return "InvalidParams";
        case ErrorKind::DanglingEdge: return "DanglingEdge";
        case ErrorKind::IncompatibleGraph: return "IncompatibleGraph";
        case ErrorKind::FieldTooSmall: return "FieldTooSmall";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::InconsistentRecovery: return "InconsistentRecovery";
        case ErrorKind::MultiLevelUnsupported: return "MultiLevelUnsupported";
        case ErrorKind::InvalidSplit: return "InvalidSplit";
        case ErrorKind::UnderdeterminedS: return "UnderdeterminedS";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace hiercode
