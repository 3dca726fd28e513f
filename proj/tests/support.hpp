#pragma once

// Independent reference computations and fixtures shared by the tests.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "usd/ensemble.hpp"
#include "usd/ladder.hpp"
#include "usd/usd_sdp.hpp"

namespace usd::testing {

using cd = std::complex<double>;

inline Eigen::MatrixXcd bb84_states() {
    const double h = 1.0 / std::sqrt(2.0);
    const cd i(0.0, 1.0);
    const std::vector<Eigen::Vector2cd> pol{{h, h}, {h, -h}, {h, i * h}, {h, -i * h}};
    Eigen::MatrixXcd out(8, 4);
    for (int s = 0; s < 4; ++s) {
        const Eigen::Vector2cd &q = pol[static_cast<std::size_t>(s)];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) out(4 * a + 2 * b + c, s) = q(a) * q(b) * q(c);
    }
    return out;
}

inline Ensemble bb84_ensemble() { return make_ensemble(bb84_states(), Eigen::VectorXd::Constant(4, 0.25)); }

/// Two real states |1> and cos t |1> + sin t |2>.
inline Ensemble two_state(double overlap, Eigen::VectorXd priors = Eigen::Vector2d(0.5, 0.5)) {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
    s(0, 0) = 1.0;
    s(0, 1) = overlap;
    s(1, 1) = std::sqrt(1.0 - overlap * overlap);
    return make_ensemble(s, priors);
}

/// Three real unit vectors with every pairwise overlap equal to `s`.
inline Ensemble symmetric_trine(double s) {
    Eigen::Matrix3d g = (1.0 - s) * Eigen::Matrix3d::Identity() + s * Eigen::Matrix3d::Ones();
    Eigen::Matrix3d upper = g.llt().matrixU();
    return make_ensemble(upper.cast<cd>(), Eigen::Vector3d::Constant(1.0 / 3.0));
}

inline Eigen::MatrixXcd random_states(std::mt19937_64 &rng, int d, int n) {
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd m(d, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < d; ++i) m(i, j) = cd(gauss(rng), gauss(rng));
        m.col(j).normalize();
    }
    return m;
}

inline Eigen::VectorXd random_priors(std::mt19937_64 &rng, int n) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p(i) = u(rng);
    return p / p.sum();
}

inline Ensemble random_ensemble(std::mt19937_64 &rng, int n, int d) {
    return make_ensemble(random_states(rng, d, n), random_priors(rng, n));
}

/// Random ensemble whose optimum detects every state (min p_i >= 1e-4).
/// `skipped` counts rejected draws.
inline Ensemble random_detectable_ensemble(std::mt19937_64 &rng, int n, int d, int *skipped = nullptr) {
    for (;;) {
        Ensemble e = random_ensemble(rng, n, d);
        const UsdSolution sol = solve_usd(e, reciprocal_states(ladder_coefficients(e)));
        if (sol.p.minCoeff() >= 1e-4) return e;
        if (skipped) ++*skipped;
    }
}

/// Haar-ish unitary via Gram-Schmidt on a Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(std::mt19937_64 &rng, int n) {
    Eigen::MatrixXcd m = random_states(rng, n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < j; ++k) m.col(j) -= m.col(k).dot(m.col(j)) * m.col(k);
        m.col(j).normalize();
    }
    return m;
}

/// Eigenvalues of a Hermitian 2x2 or 3x3 matrix from its characteristic
/// polynomial (closed forms), ascending.
inline std::vector<double> charpoly_eigenvalues(const Eigen::MatrixXcd &m) {
    if (m.rows() == 2) {
        const double a = m(0, 0).real();
        const double d = m(1, 1).real();
        const double disc = std::sqrt((a - d) * (a - d) / 4.0 + std::norm(m(0, 1)));
        return {(a + d) / 2.0 - disc, (a + d) / 2.0 + disc};
    }
    // x^3 - t x^2 + s x - det = 0, trigonometric form.
    const double t = m.trace().real();
    const double s = (m(0, 0) * m(1, 1) + m(0, 0) * m(2, 2) + m(1, 1) * m(2, 2) - m(0, 1) * m(1, 0) -
                      m(0, 2) * m(2, 0) - m(1, 2) * m(2, 1))
                         .real();
    const double det = m.determinant().real();
    const double p = s - t * t / 3.0;
    const double q = -2.0 * t * t * t / 27.0 + t * s / 3.0 - det;
    std::vector<double> out;
    if (std::abs(p) < 1e-300) {
        const double r = std::cbrt(-q);
        out = {r + t / 3.0, r + t / 3.0, r + t / 3.0};
    } else {
        const double amp = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * amp), -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) out.push_back(amp * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) + t / 3.0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Real roots of an even octic found by scanning x in [lo, hi] for sign
/// changes and touching minima of |poly|.
inline std::vector<double> scan_real_roots(const std::array<double, 5> &c, double lo, double hi, double step) {
    const auto f = [&](double x) {
        const double y = x * x;
        return (((c[0] * y + c[1]) * y + c[2]) * y + c[3]) * y + c[4];
    };
    std::vector<double> roots;
    double prev = f(lo);
    for (double x = lo + step; x <= hi + 1e-15; x += step) {
        const double cur = f(x);
        if (prev == 0.0 || (prev < 0.0) != (cur < 0.0)) roots.push_back(x - step / 2.0);
        prev = cur;
    }
    return roots;
}

} // namespace usd::testing
