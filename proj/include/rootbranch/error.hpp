#pragma once

#include <stdexcept>
#include <string>

namespace rootbranch {

enum class ErrorCode {
    OutOfDomain,
    NonFinite,
    ZeroOnContour,
    NonIntegerWinding,
    CofactorVanishes,
    NoConvergence,
    NoRadiusFound,
    DegenerateAtPoint,
    SyntaxError,
    ValidationError,
    InvalidArgument,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::ZeroOnContour: return "ZeroOnContour";
        case ErrorCode::NonIntegerWinding: return "NonIntegerWinding";
        case ErrorCode::CofactorVanishes: return "CofactorVanishes";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NoRadiusFound: return "NoRadiusFound";
        case ErrorCode::DegenerateAtPoint: return "DegenerateAtPoint";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t column, const std::string& what)
        : Error(ErrorCode::SyntaxError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace rootbranch
