#include "usd/synthesis.hpp"

#include <sstream>

#include "usd/error.hpp"
#include "usd/numerics.hpp"

namespace usd {

namespace {
constexpr const char *kModule = "synthesis";
}

SynthesisResult synthesize_u1(const LadderForm &ladder, const FinalConfiguration &fc, const Tolerances &tol) {
    const Eigen::Index ext = fc.ext_dim;
    const Eigen::Index n = fc.n;
    if (ladder.coeffs.cols() != n || fc.states_f.rows() != ext || fc.states_f.cols() != n ||
        ladder.u0.rows() > ext) {
        throw Error(ErrorCode::InvalidInput, kModule, "ladder form and final configuration do not match");
    }
    const ComplexMatrix initial = pad_rows(ladder.coeffs, ext);

    SynthesisResult out;
    out.a_prime = fc.states_f * initial.adjoint();
    const SvdResult f = svd(out.a_prime);
    out.u1 = f.u * f.v.adjoint();
    out.u_total = out.u1 * embed_unitary(ladder.u0, ext);
    out.residual = (out.u1 * initial - fc.states_f).squaredNorm();
    if (!(out.residual <= tol.synthesis_failure)) {
        std::ostringstream msg;
        msg << "norm-minimization residual " << out.residual
            << " is too large; the final configuration is not an isometric image of the inputs";
        throw Error(ErrorCode::SynthesisFailure, kModule, msg.str());
    }
    return out;
}

RealVector simulate_measurement(const FinalConfiguration &fc, int state_index) {
    if (state_index < 1 || state_index > fc.n) {
        throw Error(ErrorCode::InvalidInput, kModule,
                    "state index " + std::to_string(state_index) + " outside 1.." + std::to_string(fc.n));
    }
    return fc.states_f.col(state_index - 1).cwiseAbs2();
}

} // namespace usd
