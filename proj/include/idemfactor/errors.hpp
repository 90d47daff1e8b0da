#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idemfactor {

enum class ErrorKind {
    DimensionMismatch,
    NonSquare,
    FieldUnsupported,
    Singular,
    DependentColumns,
    BadDimension,
    NotApplicable,
    WrongClass,
    RangeNotContained,
    FactorNotIdempotent,
    ProductMismatch,
    BadParameter,
    BadJ,
    SingularParameter,
    TooLarge,
    InternalNormalizationFailure,
    InvalidInput,
};

constexpr std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::FieldUnsupported: return "FieldUnsupported";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DependentColumns: return "DependentColumns";
    case ErrorKind::BadDimension: return "BadDimension";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::WrongClass: return "WrongClass";
    case ErrorKind::RangeNotContained: return "RangeNotContained";
    case ErrorKind::FactorNotIdempotent: return "FactorNotIdempotent";
    case ErrorKind::ProductMismatch: return "ProductMismatch";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::BadJ: return "BadJ";
    case ErrorKind::SingularParameter: return "SingularParameter";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InternalNormalizationFailure: return "InternalNormalizationFailure";
    case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

/**
 * Every failure raised by the library carries a machine-readable kind so the
 * CLI can map it to an exit code and callers can branch on it.
 */
class Error : public std::runtime_error
{
  public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

  private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace idemfactor
