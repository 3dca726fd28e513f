#include "usd/usd_sdp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "usd/error.hpp"
#include "usd/numerics.hpp"

namespace usd {

namespace {

constexpr const char *kModule = "usd_sdp";
constexpr double kInf = std::numeric_limits<double>::infinity();

ComplexMatrix weighted_sum(const ComplexMatrix &q, const RealVector &p) {
    return q * p.cast<Complex>().asDiagonal() * q.adjoint();
}

struct BarrierProblem {
    const ComplexMatrix &q;
    const RealVector &mu;
    Eigen::Index n;

    // -t mu.p - log det M(p) - sum log p; +inf outside the domain.
    double value(const RealVector &p, double t) const {
        if ((p.array() <= 0.0).any()) return kInf;
        const ComplexMatrix m = ComplexMatrix::Identity(n, n) - weighted_sum(q, p);
        Eigen::LLT<ComplexMatrix> llt(m);
        if (llt.info() != Eigen::Success) return kInf;
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double lii = llt.matrixLLT()(i, i).real();
            if (!(lii > 0.0)) return kInf;
            logdet += 2.0 * std::log(lii);
        }
        return -t * mu.dot(p) - logdet - p.array().log().sum();
    }

    void derivatives(const RealVector &p, double t, RealVector &grad, Eigen::MatrixXd &hess) const {
        const ComplexMatrix m = ComplexMatrix::Identity(n, n) - weighted_sum(q, p);
        const ComplexMatrix minv_q = m.llt().solve(q);
        const ComplexMatrix w = q.adjoint() * minv_q;
        grad.resize(n);
        hess.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            grad(i) = -t * mu(i) + w(i, i).real() - 1.0 / p(i);
            for (Eigen::Index j = 0; j < n; ++j) hess(i, j) = std::norm(w(i, j));
            hess(i, i) += 1.0 / (p(i) * p(i));
        }
    }
};

// Largest admissible value of p_i with the other entries held fixed.
double coordinate_room(const ComplexMatrix &q, const RealVector &p, Eigen::Index i) {
    const Eigen::Index n = q.rows();
    const ComplexMatrix others =
        ComplexMatrix::Identity(n, n) - weighted_sum(q, p) + p(i) * q.col(i) * q.col(i).adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (others + others.adjoint()));
    const ComplexVector proj = eig.eigenvectors().adjoint() * q.col(i);
    const double scale = q.col(i).squaredNorm();
    double inv = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double w = std::norm(proj(k));
        if (eig.eigenvalues()(k) <= 1e-9) {
            if (w > 1e-12 * scale) return p(i);
            continue;
        }
        inv += w / eig.eigenvalues()(k);
    }
    return inv > 0.0 ? 1.0 / inv : 1.0;
}

} // namespace

ComplexMatrix inconclusive_operator(const ReciprocalSet &rec, const RealVector &p) {
    const Eigen::Index n = rec.tilde_states.rows();
    return ComplexMatrix::Identity(n, n) - weighted_sum(rec.tilde_states, p);
}

ReciprocalSet reciprocal_states(const ComplexMatrix &coeffs, const Tolerances &tol) {
    if (coeffs.rows() != coeffs.cols() || coeffs.rows() == 0) {
        throw Error(ErrorCode::InvalidInput, kModule, "ladder coefficients must be square");
    }
    const RealVector eig = hermitian_eigenvalues(gram_matrix(coeffs), 1e-8);
    const double lo = eig(0);
    const double hi = eig(eig.size() - 1);
    if (!(lo > 0.0) || hi / lo > tol.condition) {
        std::ostringstream msg;
        msg << "Gram condition number " << (lo > 0.0 ? hi / lo : kInf) << " exceeds " << tol.condition;
        throw Error(ErrorCode::IllConditioned, kModule, msg.str());
    }
    // C (C^dag C)^-1 = C^-dag, and C^dag is lower triangular.
    const Eigen::Index n = coeffs.rows();
    ReciprocalSet rec;
    rec.tilde_states = coeffs.adjoint().triangularView<Eigen::Lower>().solve(ComplexMatrix::Identity(n, n));
    return rec;
}

UsdSolution solve_usd(const Ensemble &e, const ReciprocalSet &rec, const BarrierOptions &opts,
                      const Tolerances &tol) {
    const ComplexMatrix &q = rec.tilde_states;
    const Eigen::Index n = q.cols();
    if (n != e.size() || q.rows() != n) {
        throw Error(ErrorCode::InvalidInput, kModule, "reciprocal set does not match the ensemble");
    }
    const BarrierProblem problem{q, e.priors, n};

    const double lmax = hermitian_eigenvalues(weighted_sum(q, RealVector::Ones(n)), 1e-8).maxCoeff();
    RealVector p = RealVector::Constant(n, 0.5 / (static_cast<double>(n) * lmax));
    if (!std::isfinite(problem.value(p, opts.t_initial))) {
        throw Error(ErrorCode::Infeasible, kModule, "no strictly feasible starting point");
    }

    int iterations = 0;
    double t = opts.t_initial;
    RealVector grad;
    Eigen::MatrixXd hess;
    for (;;) {
        for (;;) {
            problem.derivatives(p, t, grad, hess);
            const RealVector step = hess.llt().solve(-grad);
            const double decrement = -grad.dot(step);
            if (!std::isfinite(decrement)) {
                throw Error(ErrorCode::SolverStalled, kModule, "Newton system became singular");
            }
            if (decrement / 2.0 <= 1e-12) break;
            if (++iterations > opts.max_iterations) {
                throw Error(ErrorCode::SolverStalled, kModule,
                            "no convergence after " + std::to_string(opts.max_iterations) + " Newton steps");
            }

            const double f0 = problem.value(p, t);
            double s = 1.0;
            bool moved = false;
            while (s > 1e-20) {
                const RealVector trial = p + s * step;
                const double f1 = problem.value(trial, t);
                // Inside the quadratic-convergence region a full step is always
                // feasible and decreasing; Armijo would only fight rounding.
                if (std::isfinite(f1) && (f1 <= f0 + 0.25 * s * grad.dot(step) || (s == 1.0 && decrement < 0.25))) {
                    p = trial;
                    moved = true;
                    break;
                }
                s *= 0.5;
            }
            if (!moved) break;
        }
        if (2.0 * static_cast<double>(n) / t <= opts.gap_target) break;
        t *= opts.t_factor;
    }

    // Push the central point onto the boundary along p, then let each
    // coordinate take whatever room is left.
    const double lam = hermitian_eigenvalues(weighted_sum(q, p), 1e-8).maxCoeff();
    if (lam > 0.0) p /= lam;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double room = coordinate_room(q, p, i);
        if (room > p(i)) p(i) = room;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (p(i) <= tol.conclusive_floor) p(i) = 0.0;
        if (p(i) > 1.0) p(i) = 1.0;
    }

    UsdSolution sol;
    sol.p = p;
    sol.total_pd = e.priors.dot(p);
    sol.duality_gap = 2.0 * static_cast<double>(n) / t;
    sol.iterations = iterations;
    return sol;
}

UsdSolution oracle_usd(const Ensemble &e, const ReciprocalSet &rec, double grid_step) {
    const Eigen::Index n = e.size();
    if (n > 3) {
        throw Error(ErrorCode::OracleTooLarge, kModule,
                    "grid oracle supports N <= 3, got " + std::to_string(n));
    }
    if (!(grid_step > 0.0) || grid_step > 1.0) {
        throw Error(ErrorCode::InvalidInput, kModule, "grid step must lie in (0, 1]");
    }
    const auto steps = static_cast<int>(std::floor(1.0 / grid_step + 1e-9));
    int evaluations = 0;
    RealVector p(n);
    auto feasible = [&](const RealVector &trial) {
        ++evaluations;
        return hermitian_min_eigenvalue(inconclusive_operator(rec, trial), 1e-8) >= -1e-10;
    };

    double best = -1.0;
    RealVector best_p = RealVector::Zero(n);
    auto consider = [&](const RealVector &trial) {
        const double value = e.priors.dot(trial);
        if (value > best + 1e-15) {
            best = value;
            best_p = trial;
        }
    };

    // The feasible set is down-closed, so the largest feasible last coordinate
    // never grows as earlier coordinates grow: walk it down as a staircase.
    if (n == 2) {
        int top = steps;
        for (int k1 = 0; k1 <= steps && top >= 0; ++k1) {
            p(0) = k1 * grid_step;
            for (; top >= 0; --top) {
                p(1) = top * grid_step;
                if (feasible(p)) break;
            }
            if (top >= 0) consider(p);
        }
    } else {
        std::vector<int> tops(static_cast<std::size_t>(steps + 1), steps);
        for (int k1 = 0; k1 <= steps; ++k1) {
            p(0) = k1 * grid_step;
            int ceiling = steps;
            bool any = false;
            for (int k2 = 0; k2 <= steps; ++k2) {
                int &top = tops[static_cast<std::size_t>(k2)];
                top = std::min(top, ceiling);
                p(1) = k2 * grid_step;
                for (; top >= 0; --top) {
                    p(2) = top * grid_step;
                    if (feasible(p)) break;
                }
                if (top < 0) {
                    for (int r = k2; r <= steps; ++r) tops[static_cast<std::size_t>(r)] = -1;
                    break;
                }
                any = true;
                ceiling = top;
                consider(p);
            }
            if (!any) break;
        }
    }

    UsdSolution sol;
    sol.p = best_p;
    sol.total_pd = best;
    sol.duality_gap = 0.0;
    sol.iterations = evaluations;
    return sol;
}

} // namespace usd
