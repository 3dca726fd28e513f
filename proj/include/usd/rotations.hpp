#pragma once

#include <vector>

#include "usd/common.hpp"

namespace usd {

/// Degrees. gamma_half is gamma / 2, in [-90, 90].
struct EulerAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma_half = 0.0;
    double delta = 0.0;
};

/// Two-level rotation R_kl (k < l, 1-based). `matrix` is the full R_kl;
/// the angles describe the (k, l) block of its adjoint.
struct RotationStep {
    int k = 0;
    int l = 0;
    ComplexMatrix matrix;
    EulerAngles angles;
    bool identity = false;
};

/// Steps in the order (1,2), (1,3), ..., (n-1,n); U = R_12^dag R_13^dag ...
struct RotationSequence {
    std::vector<RotationStep> steps;
    double reconstruction_error = 0.0;  // Frobenius
};

/// The (k, l) block of a full matrix.
Eigen::Matrix2cd plane_block(const ComplexMatrix &m, int k, int l);

/// e^{i alpha} Rz(beta) Ry(gamma) Rz(delta) with Rz(t) = exp(-i t sigma_z / 2),
/// Ry(t) = exp(-i t sigma_y / 2).
Eigen::Matrix2cd euler_block(const EulerAngles &angles);

/// Angles reproducing `block` (unitary 2x2) within `tol`. Among valid
/// choices, non-negative gamma_half wins, then the smallest |alpha|, |beta|,
/// |delta|. Throws AngleExtractionFailure when none reproduces the block.
EulerAngles euler_angles(const Eigen::Matrix2cd &block, double tol = Tolerances{}.euler);

EulerAngles euler_angles(const RotationStep &step, double tol = Tolerances{}.euler);

/// R_12^dag R_13^dag ... R_{n-1,n}^dag.
ComplexMatrix rotation_product(const RotationSequence &seq, Eigen::Index dim);

RotationSequence decompose(const ComplexMatrix &u, const Tolerances &tol = {});

} // namespace usd
