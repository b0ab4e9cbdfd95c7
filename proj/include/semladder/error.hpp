#pragma once
// Error model shared by every module. Operations throw semladder::Error;
// the code identifies the failure class, the message carries detail.

#include <stdexcept>
#include <string>
#include <string_view>

namespace semladder {

enum class ErrorCode {
    InvalidArgument,
    InvalidOffsets,
    NotFound,
    Conflict,
    Cycle,
    UnknownRole,
    NoRoles,
    AmbiguousPattern,
    InvalidSchema,
    BindingArity,
    ConstraintFailure,
    InvalidLiteral,
    MissingLabel,
    NoRenderer,
    UnsupportedLevel,
    WrongSchema,
    InvalidCrosswalk,
    InvalidRule,
    NoRoute,
    NoText,
    InvalidVocabulary,
    ParseError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::InvalidOffsets: return "invalid-offsets";
        case ErrorCode::NotFound: return "not-found";
        case ErrorCode::Conflict: return "conflict";
        case ErrorCode::Cycle: return "cycle-error";
        case ErrorCode::UnknownRole: return "unknown-role";
        case ErrorCode::NoRoles: return "no-roles";
        case ErrorCode::AmbiguousPattern: return "ambiguous-pattern";
        case ErrorCode::InvalidSchema: return "invalid-schema";
        case ErrorCode::BindingArity: return "binding-arity";
        case ErrorCode::ConstraintFailure: return "constraint-failure";
        case ErrorCode::InvalidLiteral: return "invalid-literal";
        case ErrorCode::MissingLabel: return "missing-label";
        case ErrorCode::NoRenderer: return "no-renderer";
        case ErrorCode::UnsupportedLevel: return "unsupported-level";
        case ErrorCode::WrongSchema: return "wrong-schema";
        case ErrorCode::InvalidCrosswalk: return "invalid-crosswalk";
        case ErrorCode::InvalidRule: return "invalid-rule";
        case ErrorCode::NoRoute: return "no-route";
        case ErrorCode::NoText: return "no-text";
        case ErrorCode::InvalidVocabulary: return "invalid-vocabulary";
        case ErrorCode::ParseError: return "parse-error";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& detail) {
    throw Error(code, detail);
}

}  // namespace semladder
