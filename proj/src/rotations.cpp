#include "usd/rotations.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "usd/error.hpp"
#include "usd/numerics.hpp"

namespace usd {

namespace {

constexpr const char *kModule = "rotations";
constexpr double kDeg = 180.0 / std::numbers::pi;
constexpr double kSlack = 1e-9;

double wrap_degrees(double t) {
    t = std::fmod(t + 180.0, 360.0);
    if (t < 0.0) t += 360.0;
    t -= 180.0;
    return t <= -180.0 + kSlack ? t + 360.0 : t;
}

bool in_half_open_range(double t) { return t > -180.0 + kSlack && t <= 180.0 + kSlack; }

double snap(double t) { return std::abs(t - 180.0) <= kSlack ? 180.0 : t; }

// Lexicographic preference used to pick one representative angle set.
bool preferred(const EulerAngles &lhs, const EulerAngles &rhs) {
    const auto key = [](const EulerAngles &a) {
        return std::array<double, 4>{a.gamma_half < -kSlack ? 1.0 : 0.0, std::abs(a.alpha), std::abs(a.beta),
                                     std::abs(a.delta)};
    };
    const auto kl = key(lhs);
    const auto kr = key(rhs);
    for (std::size_t i = 0; i < kl.size(); ++i) {
        if (kl[i] < kr[i] - kSlack) return true;
        if (kl[i] > kr[i] + kSlack) return false;
    }
    return false;
}

} // namespace

Eigen::Matrix2cd plane_block(const ComplexMatrix &m, int k, int l) {
    Eigen::Matrix2cd b;
    b << m(k - 1, k - 1), m(k - 1, l - 1), m(l - 1, k - 1), m(l - 1, l - 1);
    return b;
}

Eigen::Matrix2cd euler_block(const EulerAngles &angles) {
    const Complex i(0.0, 1.0);
    const auto rz = [&](double deg) {
        const double h = deg / kDeg / 2.0;
        Eigen::Matrix2cd r;
        r << std::exp(-i * h), 0.0, 0.0, std::exp(i * h);
        return r;
    };
    const double g = angles.gamma_half / kDeg;
    Eigen::Matrix2cd ry;
    ry << std::cos(g), -std::sin(g), std::sin(g), std::cos(g);
    return std::exp(i * (angles.alpha / kDeg)) * rz(angles.beta) * ry * rz(angles.delta);
}

EulerAngles euler_angles(const Eigen::Matrix2cd &block, double tol) {
    const Complex det = block.determinant();
    const double alpha0 = std::arg(det) * kDeg / 2.0;

    bool found = false;
    EulerAngles best;
    for (double alpha : {wrap_degrees(alpha0), wrap_degrees(alpha0 + 180.0)}) {
        const Eigen::Matrix2cd v = std::exp(Complex(0.0, -alpha / kDeg)) * block;
        const Complex x = v(0, 0);
        const Complex y = v(1, 0);
        const double g = std::atan2(std::abs(y), std::abs(x)) * kDeg;
        std::vector<double> gammas{g};
        if (g > kSlack) gammas.push_back(-g);
        for (double gh : gammas) {
            const double sum = std::abs(x) > 1e-12 ? -2.0 * std::arg(x) * kDeg : 0.0;
            const double diff = std::abs(y) > 1e-12 ? 2.0 * std::arg(gh < 0.0 ? -y : y) * kDeg : 0.0;
            for (int ms = -2; ms <= 2; ++ms) {
                for (int md = -2; md <= 2; ++md) {
                    const double s = sum + 720.0 * ms;
                    const double dd = diff + 720.0 * md;
                    const double beta = (s + dd) / 2.0;
                    const double delta = (s - dd) / 2.0;
                    if (!in_half_open_range(beta) || !in_half_open_range(delta)) continue;
                    const EulerAngles cand{alpha, snap(beta), gh, snap(delta)};
                    if ((euler_block(cand) - block).cwiseAbs().maxCoeff() > tol) continue;
                    if (!found || preferred(cand, best)) {
                        best = cand;
                        found = true;
                    }
                }
            }
        }
    }
    if (!found) {
        throw Error(ErrorCode::AngleExtractionFailure, kModule, "no Euler angle branch reproduces the block");
    }
    return best;
}

EulerAngles euler_angles(const RotationStep &step, double tol) {
    return euler_angles(plane_block(step.matrix.adjoint(), step.k, step.l), tol);
}

ComplexMatrix rotation_product(const RotationSequence &seq, Eigen::Index dim) {
    ComplexMatrix out = ComplexMatrix::Identity(dim, dim);
    for (const RotationStep &step : seq.steps) out = out * step.matrix.adjoint();
    return out;
}

RotationSequence decompose(const ComplexMatrix &u, const Tolerances &tol) {
    const Eigen::Index n = u.rows();
    if (n != u.cols() || n < 2) {
        throw Error(ErrorCode::InvalidMatrix, kModule, "decomposition needs a square matrix of size >= 2");
    }
    if (!all_finite(u)) throw Error(ErrorCode::InvalidMatrix, kModule, "matrix has non-finite entries");
    const double defect = unitarity_error(u);
    if (defect > 1e-8) {
        std::ostringstream msg;
        msg << "max |U^dag U - I| = " << defect;
        throw Error(ErrorCode::NotUnitary, kModule, msg.str());
    }

    RotationSequence seq;
    ComplexMatrix work = u;
    auto record = [&](Eigen::Index k, Eigen::Index l, const Eigen::Matrix2cd &r) {
        RotationStep step;
        step.k = static_cast<int>(k + 1);
        step.l = static_cast<int>(l + 1);
        step.matrix = ComplexMatrix::Identity(n, n);
        step.matrix(k, k) = r(0, 0);
        step.matrix(k, l) = r(0, 1);
        step.matrix(l, k) = r(1, 0);
        step.matrix(l, l) = r(1, 1);
        step.identity = (r - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <= 1e-14;
        const Eigen::RowVectorXcd row_k = work.row(k);
        const Eigen::RowVectorXcd row_l = work.row(l);
        work.row(k) = r(0, 0) * row_k + r(0, 1) * row_l;
        work.row(l) = r(1, 0) * row_k + r(1, 1) * row_l;
        step.angles = euler_angles(step, tol.euler);
        seq.steps.push_back(std::move(step));
    };

    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        for (Eigen::Index l = k + 1; l < n; ++l) {
            const Complex a = work(k, k);
            const Complex b = work(l, k);
            Eigen::Matrix2cd r = Eigen::Matrix2cd::Identity();
            if (std::abs(b) > 1e-13) {
                const double nrm = std::hypot(std::abs(a), std::abs(b));
                r << std::conj(a) / nrm, std::conj(b) / nrm, b / nrm, -a / nrm;
            } else if (l == n - 1 && std::abs(a - std::abs(a)) > 1e-13 && std::abs(a) > 0.0) {
                r(0, 0) = std::conj(a) / std::abs(a);
            }
            record(k, l, r);
        }
    }
    const Eigen::Matrix2cd tail = plane_block(work, static_cast<int>(n - 1), static_cast<int>(n));
    record(n - 2, n - 1, tail.adjoint());

    seq.reconstruction_error = (rotation_product(seq, n) - u).norm();
    if (seq.reconstruction_error > tol.decomposition_failure) {
        std::ostringstream msg;
        msg << "rotation product misses U by " << seq.reconstruction_error;
        throw Error(ErrorCode::DecompositionFailure, kModule, msg.str());
    }
    return seq;
}

} // namespace usd
