#include "usd/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "usd/error.hpp"

namespace usd {

namespace {

constexpr const char *kModule = "numerics";

void require_finite(const ComplexMatrix &m, const char *what) {
    if (!all_finite(m)) {
        throw Error(ErrorCode::InvalidMatrix, kModule, std::string(what) + " has non-finite entries");
    }
}

// Parlett-Reinsch diagonal similarity scaling (radix 2, so exact in binary
// floating point). Companion matrices of polynomials whose coefficients span
// many orders of magnitude lose all accuracy in their small eigenvalues
// without it.
void balance(Eigen::MatrixXd &a) {
    constexpr double radix = 2.0;
    constexpr double radix_sq = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / radix;
            while (c < g) {
                f *= radix;
                c *= radix_sq;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= radix_sq;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

Complex horner(const std::vector<double> &descending, Complex y) {
    Complex acc = 0.0;
    for (double c : descending) acc = acc * y + c;
    return acc;
}

Complex horner_derivative(const std::vector<double> &descending, Complex y) {
    Complex acc = 0.0;
    const auto degree = static_cast<double>(descending.size() - 1);
    for (std::size_t i = 0; i + 1 < descending.size(); ++i) {
        acc = acc * y + descending[i] * (degree - static_cast<double>(i));
    }
    return acc;
}

bool complex_less(const Complex &lhs, const Complex &rhs) {
    if (lhs.real() != rhs.real()) return lhs.real() < rhs.real();
    return lhs.imag() < rhs.imag();
}

} // namespace

bool all_finite(const ComplexMatrix &m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
        }
    }
    return true;
}

double max_abs(const ComplexMatrix &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double unitarity_error(const ComplexMatrix &u) {
    if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
    const ComplexMatrix defect = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
    return max_abs(defect);
}

ComplexMatrix embed_unitary(const ComplexMatrix &m, Eigen::Index dim) {
    ComplexMatrix out = ComplexMatrix::Identity(dim, dim);
    out.topLeftCorner(m.rows(), m.cols()) = m;
    return out;
}

SvdResult svd(const ComplexMatrix &m) {
    require_finite(m, "svd input");
    Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdResult out{solver.matrixU(), solver.singularValues(), solver.matrixV()};

    const Eigen::Index paired = out.sigma.size();
    for (Eigen::Index k = 0; k < out.u.cols(); ++k) {
        Eigen::Index pivot = 0;
        double largest = -1.0;
        for (Eigen::Index i = 0; i < out.u.rows(); ++i) {
            const double mag = std::abs(out.u(i, k));
            if (mag > largest) {
                largest = mag;
                pivot = i;
            }
        }
        if (largest <= 0.0) continue;
        const Complex phase = std::conj(out.u(pivot, k)) / largest;
        out.u.col(k) *= phase;
        out.u(pivot, k) = Complex(std::abs(out.u(pivot, k)), 0.0);
        if (k < paired) out.v.col(k) *= phase;
    }
    return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix &m, double hermiticity_tol) {
    if (m.rows() != m.cols()) {
        throw Error(ErrorCode::InvalidMatrix, kModule, "eigenvalues requested for a non-square matrix");
    }
    require_finite(m, "hermitian eigenvalue input");
    const double skew = max_abs(m - m.adjoint());
    if (skew > hermiticity_tol) {
        throw Error(ErrorCode::NotHermitian, kModule,
                    "matrix deviates from Hermitian by " + std::to_string(skew));
    }
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double hermitian_min_eigenvalue(const ComplexMatrix &m, double hermiticity_tol) {
    if (m.size() == 0) {
        throw Error(ErrorCode::InvalidMatrix, kModule, "empty matrix");
    }
    return hermitian_eigenvalues(m, hermiticity_tol)(0);
}

ComplexMatrix gram_matrix(const ComplexMatrix &columns) {
    require_finite(columns, "gram input");
    return columns.adjoint() * columns;
}

Complex evaluate_even_polynomial(const EvenOcticCoefficients &coeffs, Complex x) {
    const Complex y = x * x;
    Complex acc = 0.0;
    for (double c : coeffs) acc = acc * y + c;
    return acc;
}

std::vector<Complex> even_polynomial_squared_roots(const EvenOcticCoefficients &coeffs) {
    double scale = 0.0;
    for (double c : coeffs) {
        if (!std::isfinite(c)) {
            throw Error(ErrorCode::InvalidInput, kModule, "non-finite polynomial coefficient");
        }
        scale = std::max(scale, std::abs(c));
    }
    if (scale == 0.0) {
        throw Error(ErrorCode::DegeneratePolynomial, kModule, "all polynomial coefficients vanish");
    }

    std::size_t lead = 0;
    while (lead < coeffs.size() && std::abs(coeffs[lead]) <= 1e-12 * scale) ++lead;
    std::vector<double> poly(coeffs.begin() + static_cast<std::ptrdiff_t>(lead), coeffs.end());
    const auto degree = static_cast<Eigen::Index>(poly.size()) - 1;
    if (degree <= 0) return {};

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (Eigen::Index j = 0; j < degree; ++j) {
        companion(0, j) = -poly[static_cast<std::size_t>(j + 1)] / poly[0];
    }
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    balance(companion);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<Complex> roots;
    roots.reserve(static_cast<std::size_t>(degree));
    for (Eigen::Index i = 0; i < degree; ++i) {
        Complex y = solver.eigenvalues()(i);
        // A couple of Newton steps recover digits the eigensolver leaves on
        // the table; keep them only when they actually reduce the residual.
        for (int it = 0; it < 3; ++it) {
            const Complex f = horner(poly, y);
            const Complex df = horner_derivative(poly, y);
            if (std::abs(df) == 0.0) break;
            const Complex candidate = y - f / df;
            if (std::abs(horner(poly, candidate)) < std::abs(f)) {
                y = candidate;
            } else {
                break;
            }
        }
        roots.push_back(y);
    }
    std::sort(roots.begin(), roots.end(), complex_less);
    return roots;
}

std::vector<Complex> real_even_polynomial_roots(const EvenOcticCoefficients &coeffs) {
    std::vector<Complex> out;
    for (const Complex &y : even_polynomial_squared_roots(coeffs)) {
        const Complex x = std::sqrt(y);
        out.push_back(x);
        out.push_back(-x);
    }
    return out;
}

} // namespace usd
