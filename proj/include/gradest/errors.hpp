#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gradest {

enum class ErrorCode {
    InvalidParameter,
    KZeroUnsupported,
    EmptyDomain,
    OutOfDomain,
    NonConvergence,
    StencilFailure,
    ConditionFailure,
    HypothesisMismatch,
    NoSignChange,
    MultipleSignChanges,
    SolverFailure,
    OutsideWindow,
    Parse,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` drives CLI exit codes and
/// lets tests assert on the failure category instead of message text.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace gradest
