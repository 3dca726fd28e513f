#pragma once

#include <array>
#include <vector>

#include "usd/common.hpp"

namespace usd {

/// Full singular value decomposition m = u * diag(sigma) * v^dag.
///
/// u is rows x rows, v is cols x cols, sigma holds min(rows, cols) values in
/// descending order. Each column of u is rotated so that its entry of largest
/// modulus is real and non-negative (the matching column of v gets the same
/// phase), which makes the result reproducible bit for bit.
struct SvdResult {
    ComplexMatrix u;
    RealVector sigma;
    ComplexMatrix v;
};

SvdResult svd(const ComplexMatrix &m);

/// Smallest eigenvalue of a Hermitian matrix. Throws NotHermitian when
/// max |m - m^dag| exceeds `hermiticity_tol`.
double hermitian_min_eigenvalue(const ComplexMatrix &m, double hermiticity_tol = Tolerances{}.hermiticity);

/// All eigenvalues of a Hermitian matrix, ascending.
RealVector hermitian_eigenvalues(const ComplexMatrix &m, double hermiticity_tol = Tolerances{}.hermiticity);

/// Coefficients (A, B, C, D, E) of A x^8 + B x^6 + C x^4 + D x^2 + E.
using EvenOcticCoefficients = std::array<double, 5>;

/// Roots in y = x^2 of A y^4 + B y^3 + C y^2 + D y + E, from the eigenvalues
/// of the balanced companion matrix. Leading coefficients below 1e-12 of the
/// largest one are treated as zero (those roots are at infinity and are not
/// returned). Sorted by (real, imag).
std::vector<Complex> even_polynomial_squared_roots(const EvenOcticCoefficients &coeffs);

/// All finite roots x of the even octic: +-sqrt(y) for every y above, so
/// eight values unless the leading coefficient vanishes.
std::vector<Complex> real_even_polynomial_roots(const EvenOcticCoefficients &coeffs);

/// Evaluates A x^8 + B x^6 + C x^4 + D x^2 + E at complex x.
Complex evaluate_even_polynomial(const EvenOcticCoefficients &coeffs, Complex x);

/// G = columns^dag * columns, i.e. G(i, j) = <Q_i|Q_j>.
ComplexMatrix gram_matrix(const ComplexMatrix &columns);

/// max |U^dag U - I| (entrywise).
double unitarity_error(const ComplexMatrix &u);

double max_abs(const ComplexMatrix &m);

bool all_finite(const ComplexMatrix &m);

/// m placed in the top-left corner of a dim x dim identity.
ComplexMatrix embed_unitary(const ComplexMatrix &m, Eigen::Index dim);

} // namespace usd
