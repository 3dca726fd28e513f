#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "usd/common.hpp"

namespace usd {

/// N pure states (columns of `states`, each of length `dim`) with priors.
///
/// Built only through make_ensemble / load_ensemble, which enforce unit norm,
/// normalized priors and linear independence, and fix the global phase of each
/// state so that its first non-negligible component is real positive.
struct Ensemble {
    Eigen::Index dim = 0;
    ComplexMatrix states;
    RealVector priors;

    [[nodiscard]] Eigen::Index size() const { return states.cols(); }
};

/// Validates and gauge-fixes `states` (d x N). States within
/// `tol.renormalize` of unit norm are rescaled.
Ensemble make_ensemble(const ComplexMatrix &states, const RealVector &priors,
                       const Tolerances &tol = {});

/// Single-qubit polarization state for one of d+, d-, c+, c-, 0, 1.
/// Unknown labels throw ParseError.
ComplexVector polarization_state(std::string_view label);

/// Kronecker product of the factors, first factor most significant.
ComplexVector build_product_state(const std::vector<ComplexVector> &factors);

Ensemble load_ensemble(const nlohmann::json &document, const Tolerances &tol = {});
Ensemble load_ensemble_text(const std::string &text, const Tolerances &tol = {});
Ensemble load_ensemble_file(const std::filesystem::path &path, const Tolerances &tol = {});

nlohmann::json ensemble_to_json(const Ensemble &e);

} // namespace usd
