#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gkt {

enum class ErrorCode {
    NotPrime,
    OrderMismatch,
    BadGenerator,
    BadModulus,
    BadExponent,
    NoInverse,
    DuplicateAbscissa,
    EmptyPointSet,
    TooManyPoints,
    OutOfRange,
    ZeroIdentifier,
    DuplicateIdentifier,
    UnknownMember,
    CertificateInvalid,
    DuplicateRecipient,
    EmptyGroup,
    InvalidAbscissa,
    AbscissaExhausted,
    MissingLeakedKey,
    NotAMember,
    NotFound,
    ParamsTooLarge,
    CommitmentMismatch,
    ScenarioInvalid,
    Parse,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotPrime: return "NotPrime";
        case ErrorCode::OrderMismatch: return "OrderMismatch";
        case ErrorCode::BadGenerator: return "BadGenerator";
        case ErrorCode::BadModulus: return "BadModulus";
        case ErrorCode::BadExponent: return "BadExponent";
        case ErrorCode::NoInverse: return "NoInverse";
        case ErrorCode::DuplicateAbscissa: return "DuplicateAbscissa";
        case ErrorCode::EmptyPointSet: return "EmptyPointSet";
        case ErrorCode::TooManyPoints: return "TooManyPoints";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::ZeroIdentifier: return "ZeroIdentifier";
        case ErrorCode::DuplicateIdentifier: return "DuplicateIdentifier";
        case ErrorCode::UnknownMember: return "UnknownMember";
        case ErrorCode::CertificateInvalid: return "CertificateInvalid";
        case ErrorCode::DuplicateRecipient: return "DuplicateRecipient";
        case ErrorCode::EmptyGroup: return "EmptyGroup";
        case ErrorCode::InvalidAbscissa: return "InvalidAbscissa";
        case ErrorCode::AbscissaExhausted: return "AbscissaExhausted";
        case ErrorCode::MissingLeakedKey: return "MissingLeakedKey";
        case ErrorCode::NotAMember: return "NotAMember";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::ParamsTooLarge: return "ParamsTooLarge";
        case ErrorCode::CommitmentMismatch: return "CommitmentMismatch";
        case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
        case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gkt
