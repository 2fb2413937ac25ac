#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ouhf {

enum class ErrorKind {
    InvalidArgument,
    DegenerateInput,
    MomentDegenerate,
    BackTransformDomain,
    Domain,
    NumericalInconsistency,
    UndefinedMoments,
    Collinearity,
    InvalidHistory,
    InsufficientData,
    Io,
    Schema,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::DegenerateInput: return "degenerate-input";
        case ErrorKind::MomentDegenerate: return "moment-degenerate";
        case ErrorKind::BackTransformDomain: return "back-transform-domain";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::NumericalInconsistency: return "numerical-inconsistency";
        case ErrorKind::UndefinedMoments: return "undefined-moments";
        case ErrorKind::Collinearity: return "collinearity";
        case ErrorKind::InvalidHistory: return "invalid-history";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::Io: return "io";
        case ErrorKind::Schema: return "schema";
    }
    return "unknown";
}

/// Library-wide exception. `kind()` is stable and machine-readable; `what()` is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ouhf
