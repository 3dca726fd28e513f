#pragma once

#include "usd/common.hpp"
#include "usd/ensemble.hpp"

namespace usd {

/// Columns are the reciprocal states in the ladder basis, scaled so that
/// <tilde_i|c_j> = delta_ij.
struct ReciprocalSet {
    ComplexMatrix tilde_states;
};

struct UsdSolution {
    RealVector p;
    double total_pd = 0.0;
    double duality_gap = 0.0;
    int iterations = 0;
};

struct BarrierOptions {
    double t_initial = 1.0;
    double t_factor = 10.0;
    double gap_target = 1e-9;
    int max_iterations = 500;
};

ReciprocalSet reciprocal_states(const ComplexMatrix &coeffs, const Tolerances &tol = {});

/// I - sum_i p_i |tilde_i><tilde_i|.
ComplexMatrix inconclusive_operator(const ReciprocalSet &rec, const RealVector &p);

/// Maximizes sum mu_i p_i subject to inconclusive_operator(p) >= 0, p >= 0.
///
/// Log-barrier Newton method. The final barrier iterate is scaled onto the
/// boundary of the feasible set, so the returned operator is singular up to
/// rounding; entries at or below tol.conclusive_floor become 0.
UsdSolution solve_usd(const Ensemble &e, const ReciprocalSet &rec, const BarrierOptions &opts = {},
                      const Tolerances &tol = {});

/// Exhaustive grid search over [0, 1]^N (N <= 3), feasibility judged by the
/// smallest eigenvalue of the inconclusive operator (>= -1e-10).
/// `iterations` of the result counts feasibility evaluations.
UsdSolution oracle_usd(const Ensemble &e, const ReciprocalSet &rec, double grid_step);

} // namespace usd
