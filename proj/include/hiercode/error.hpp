#pragma once

#include <stdexcept>
#include <string>

namespace hiercode {

enum class ErrorKind {
    NonPrimitivePolynomial,
    DivisionByZero,
    IndicatorCollision,
    DimensionMismatch,
    BadShape,
    InvalidParams,
    DanglingEdge,
    IncompatibleGraph,
    FieldTooSmall,
    LengthMismatch,
    InconsistentRecovery,
    MultiLevelUnsupported,
    InvalidSplit,
    UnderdeterminedS,
    ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hiercode
