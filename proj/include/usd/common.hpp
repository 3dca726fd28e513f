#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace usd {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Every numerical threshold used by the pipeline. Defaults are the values
/// the checks are specified against; the CLI can override some of them.
struct Tolerances {
    double unitarity = 1e-10;      // max |U^dag U - I|
    double hermiticity = 1e-10;    // max |M - M^dag|
    double root_residual = 1e-7;   // |poly(root)| relative to max |coeff|

    double norm = 1e-8;            // unit norm of stored states
    double renormalize = 1e-6;     // input states farther than this from unit norm are rejected
    double priors = 1e-8;          // |sum(mu) - 1|
    double independence = 1e-8;    // Gram min-eigenvalue threshold
    double condition = 1e12;       // Gram condition number before IllConditioned

    double gram = 1e-8;            // Gram preservation of ladder / final states
    double feasibility = 1e-8;     // min eig of the inconclusive operator
    double conclusive_floor = 1e-10; // p_i at or below this count as zero

    double branch = 1e-9;          // c ~ 0 / d ~ 0 branch selection
    double vanishing_pair = 1e-10; // a + b below this drops the final pair
    double pivot = 1e-12;          // smallest divisor in the amplitude recursion

    double state_action = 1e-7;    // |U Q_i - Q_if|
    double synthesis_residual = 1e-8;
    double synthesis_failure = 1e-6;
    double reconstruction = 1e-8;  // rotation product vs U (Frobenius)
    double decomposition_failure = 1e-7;
    double euler = 1e-8;           // Euler round trip per block
    double measurement = 1e-8;     // outcome probabilities vs p_i
    double cross_talk = 1e-10;     // conclusive probability on the wrong outcome
};

} // namespace usd
