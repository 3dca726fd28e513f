#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace usd {

enum class ErrorCode {
    ParseError,
    InvalidInput,
    InvalidState,
    InvalidPriors,
    LinearlyDependent,
    InvalidMatrix,
    NotHermitian,
    DegeneratePolynomial,
    IllConditioned,
    Infeasible,
    SolverStalled,
    OracleTooLarge,
    DegenerateConclusiveAmplitude,
    NoRealRoot,
    RecursionBreakdown,
    InconsistentAmplitudes,
    SynthesisFailure,
    NotUnitary,
    DecompositionFailure,
    AngleExtractionFailure,
};

std::string_view to_string(ErrorCode code);

/// True for errors caused by the caller's input rather than by the numerics.
bool is_validation_error(ErrorCode code);

/// Typed failure raised by every module. `module()` names the stage that
/// detected the problem (e.g. "ensemble", "usd_sdp").
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string module, const std::string &message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string &module() const noexcept { return module_; }

  private:
    ErrorCode code_;
    std::string module_;
};

} // namespace usd
