#pragma once

#include "usd/common.hpp"
#include "usd/ensemble.hpp"

namespace usd {

/// coeffs(i, j) is the amplitude of state j on ket i (upper triangular, real
/// positive diagonal). u0 is d x d and maps each input state onto its column
/// of coeffs, zero-padded to d.
struct LadderForm {
    ComplexMatrix coeffs;
    ComplexMatrix u0;
};

ComplexMatrix ladder_coefficients(const Ensemble &e, const Tolerances &tol = {});

/// Polar factor of sum_j |c_j><Q_j|. Throws SynthesisFailure if the result
/// misses any ladder column by more than tol.synthesis_failure.
ComplexMatrix build_u0(const Ensemble &e, const ComplexMatrix &coeffs, const Tolerances &tol = {});

LadderForm make_ladder(const Ensemble &e, const Tolerances &tol = {});

/// coeffs zero-padded to `rows` rows.
ComplexMatrix pad_rows(const ComplexMatrix &coeffs, Eigen::Index rows);

} // namespace usd
