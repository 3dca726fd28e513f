#include "usd/ladder.hpp"

#include <cmath>
#include <sstream>

#include "usd/error.hpp"
#include "usd/numerics.hpp"

namespace usd {

namespace {
constexpr const char *kModule = "ladder";
}

ComplexMatrix pad_rows(const ComplexMatrix &coeffs, Eigen::Index rows) {
    ComplexMatrix out = ComplexMatrix::Zero(rows, coeffs.cols());
    out.topRows(coeffs.rows()) = coeffs;
    return out;
}

ComplexMatrix ladder_coefficients(const Ensemble &e, const Tolerances &tol) {
    const ComplexMatrix g = gram_matrix(e.states);
    const Eigen::Index n = e.size();
    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            Complex acc = g(i, j);
            for (Eigen::Index x = 0; x < i; ++x) acc -= std::conj(c(x, i)) * c(x, j);
            c(i, j) = acc / c(i, i);
        }
        double diag = g(j, j).real();
        for (Eigen::Index x = 0; x < j; ++x) diag -= std::norm(c(x, j));
        if (diag < tol.independence) {
            std::ostringstream msg;
            msg << "ladder diagonal of state " << j + 1 << " squared is " << diag;
            throw Error(ErrorCode::LinearlyDependent, kModule, msg.str());
        }
        c(j, j) = std::sqrt(diag);
    }
    return c;
}

ComplexMatrix build_u0(const Ensemble &e, const ComplexMatrix &coeffs, const Tolerances &tol) {
    const ComplexMatrix target = pad_rows(coeffs, e.dim);
    const ComplexMatrix a0 = target * e.states.adjoint();
    const SvdResult f = svd(a0);
    const ComplexMatrix u0 = f.u * f.v.adjoint();
    const double residual = max_abs(u0 * e.states - target);
    if (residual > tol.synthesis_failure) {
        std::ostringstream msg;
        msg << "U0 misses the ladder columns by " << residual;
        throw Error(ErrorCode::SynthesisFailure, kModule, msg.str());
    }
    return u0;
}

LadderForm make_ladder(const Ensemble &e, const Tolerances &tol) {
    LadderForm out;
    out.coeffs = ladder_coefficients(e, tol);
    out.u0 = build_u0(e, out.coeffs, tol);
    return out;
}

} // namespace usd
