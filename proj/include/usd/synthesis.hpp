#pragma once

#include "usd/common.hpp"
#include "usd/final_config.hpp"
#include "usd/ladder.hpp"

namespace usd {

struct SynthesisResult {
    ComplexMatrix a_prime;  // sum_i |Q_if><Q_i|, ext_dim x ext_dim
    ComplexMatrix u1;
    ComplexMatrix u_total;  // u1 * (u0 (+) I)
    double residual = 0.0;  // sum_i || U1 Q_i - Q_if ||^2
};

/// U1 = V W^dag from the SVD of A'. Throws SynthesisFailure when the
/// residual exceeds tol.synthesis_failure.
SynthesisResult synthesize_u1(const LadderForm &ladder, const FinalConfiguration &fc, const Tolerances &tol = {});

/// |<k|Q_if>|^2 for k = 1..ext_dim; `state_index` is 1-based.
RealVector simulate_measurement(const FinalConfiguration &fc, int state_index);

} // namespace usd
