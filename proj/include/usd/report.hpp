#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usd/pipeline.hpp"

namespace usd {

/// Rows of [re, im] pairs.
nlohmann::json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const nlohmann::json &j);

/// Canonical machine report. Keys are sorted and doubles printed at round-trip
/// precision, so identical runs give identical bytes.
nlohmann::json report_json(const PipelineResult &r, const Tolerances &tol);

/// Human-readable report, four decimals throughout.
std::string report_text(const PipelineResult &r);

/// Re-derives every check from the matrices and amplitudes stored in a JSON
/// report without trusting the stored check values. Malformed reports throw
/// ParseError.
std::vector<CheckResult> verify_report(const nlohmann::json &report);

} // namespace usd
