#include "gradest/errors.hpp"

namespace gradest {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::KZeroUnsupported: return "k-zero-unsupported";
    case ErrorCode::EmptyDomain: return "empty-domain";
    case ErrorCode::OutOfDomain: return "out-of-validity-domain";
    case ErrorCode::NonConvergence: return "non-convergence";
    case ErrorCode::StencilFailure: return "stencil-failure";
    case ErrorCode::ConditionFailure: return "condition-failure";
    case ErrorCode::HypothesisMismatch: return "hypothesis-mismatch";
    case ErrorCode::NoSignChange: return "no-sign-change";
    case ErrorCode::MultipleSignChanges: return "multiple-sign-changes";
    case ErrorCode::SolverFailure: return "solver-failure";
    case ErrorCode::OutsideWindow: return "outside-window";
    case ErrorCode::Parse: return "parse-error";
    case ErrorCode::Io: return "io-error";
    }
    return "unknown";
}

void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace gradest
