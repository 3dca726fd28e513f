#include "usd/error.hpp"

namespace usd {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidPriors: return "InvalidPriors";
    case ErrorCode::LinearlyDependent: return "LinearlyDependent";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DegeneratePolynomial: return "DegeneratePolynomial";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::SolverStalled: return "SolverStalled";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::DegenerateConclusiveAmplitude: return "DegenerateConclusiveAmplitude";
    case ErrorCode::NoRealRoot: return "NoRealRoot";
    case ErrorCode::RecursionBreakdown: return "RecursionBreakdown";
    case ErrorCode::InconsistentAmplitudes: return "InconsistentAmplitudes";
    case ErrorCode::SynthesisFailure: return "SynthesisFailure";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::DecompositionFailure: return "DecompositionFailure";
    case ErrorCode::AngleExtractionFailure: return "AngleExtractionFailure";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code) {
    switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidInput:
    case ErrorCode::InvalidState:
    case ErrorCode::InvalidPriors:
    case ErrorCode::LinearlyDependent:
    case ErrorCode::InvalidMatrix:
    case ErrorCode::OracleTooLarge:
        return true;
    default:
        return false;
    }
}

Error::Error(ErrorCode code, std::string module, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code), module_(std::move(module)) {}

} // namespace usd
