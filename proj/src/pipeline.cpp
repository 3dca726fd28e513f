#include "usd/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "usd/numerics.hpp"

namespace usd {

bool PipelineResult::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

CheckResult make_check(std::string name, double value, double tolerance) {
    return {std::move(name), value, tolerance, std::isfinite(value) && value <= tolerance};
}

MeasurementDefect measurement_defect(const ComplexMatrix &states_f, const RealVector &p) {
    MeasurementDefect out;
    const Eigen::Index n = states_f.cols();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double prob = std::norm(states_f(k, i));
            if (k == i) {
                out.conclusive = std::max(out.conclusive, std::abs(prob - p(i)));
            } else {
                out.cross_talk = std::max(out.cross_talk, prob);
            }
        }
    }
    return out;
}

double euler_roundtrip_error(const RotationSequence &seq) {
    double worst = 0.0;
    for (const RotationStep &step : seq.steps) {
        const Eigen::Matrix2cd block = plane_block(step.matrix.adjoint(), step.k, step.l);
        worst = std::max(worst, (euler_block(step.angles) - block).cwiseAbs().maxCoeff());
    }
    return worst;
}

PipelineResult run_pipeline(const Ensemble &e, const Tolerances &tol) {
    PipelineResult r;
    r.ensemble = e;
    r.ladder = make_ladder(e, tol);
    r.reciprocal = reciprocal_states(r.ladder.coeffs, tol);
    r.solution = solve_usd(e, r.reciprocal, BarrierOptions{}, tol);
    const int n = static_cast<int>(e.size());
    const int ext = neumark_dimension(n, static_cast<int>(e.dim));
    r.final_config = build_final_configuration(r.ladder.coeffs, r.solution, ext, tol);
    r.synthesis = synthesize_u1(r.ladder, r.final_config, tol);
    r.rotations = decompose(r.synthesis.u_total, tol);

    const ComplexMatrix gram = gram_matrix(e.states);
    const ComplexMatrix embedded = pad_rows(e.states, ext);
    auto &checks = r.checks;
    checks.push_back(make_check("unitarity.u0", unitarity_error(r.ladder.u0), tol.unitarity));
    checks.push_back(make_check("unitarity.u1", unitarity_error(r.synthesis.u1), tol.unitarity));
    checks.push_back(make_check("unitarity.u", unitarity_error(r.synthesis.u_total), tol.unitarity));
    checks.push_back(make_check("ladder.gram", max_abs(gram_matrix(r.ladder.coeffs) - gram), tol.gram));
    checks.push_back(make_check("ladder.u0_action",
                                max_abs(r.ladder.u0 * e.states - pad_rows(r.ladder.coeffs, e.dim)), tol.gram));
    checks.push_back(make_check(
        "feasibility", std::max(0.0, -hermitian_min_eigenvalue(inconclusive_operator(r.reciprocal, r.solution.p), 1e-8)),
        tol.feasibility));
    checks.push_back(make_check("total_pd", std::abs(r.solution.total_pd - e.priors.dot(r.solution.p)), 1e-12));
    double conclusive = 0.0;
    for (int i = 0; i < n; ++i) {
        conclusive = std::max(conclusive, std::abs(r.final_config.g(i) - std::sqrt(r.solution.p(i))));
    }
    checks.push_back(make_check("conclusive_amplitudes", conclusive, 1e-10));
    checks.push_back(make_check("gram_preservation", max_abs(gram_matrix(r.final_config.states_f) - gram), tol.gram));
    checks.push_back(make_check("synthesis_residual", std::abs(r.synthesis.residual), tol.synthesis_residual));
    checks.push_back(make_check("state_mapping", max_abs(r.synthesis.u_total * embedded - r.final_config.states_f),
                                tol.state_action));
    const MeasurementDefect md = measurement_defect(r.final_config.states_f, r.solution.p);
    checks.push_back(make_check("measurement.conclusive", md.conclusive, tol.measurement));
    checks.push_back(make_check("measurement.cross_talk", md.cross_talk, tol.cross_talk));
    checks.push_back(make_check("rotation_reconstruction", r.rotations.reconstruction_error, tol.reconstruction));
    checks.push_back(make_check("euler_roundtrip", euler_roundtrip_error(r.rotations), tol.euler));
    return r;
}

} // namespace usd
