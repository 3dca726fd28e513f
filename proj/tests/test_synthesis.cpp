#include <catch2/catch.hpp>

#include <Eigen/Eigenvalues>

#include "support.hpp"
#include "usd/error.hpp"
#include "usd/numerics.hpp"
#include "usd/pipeline.hpp"

using namespace usd;
using namespace usd::testing;

TEST_CASE("BB84 U1 maps ladder states onto the final states", "[synthesis]") {
    const Ensemble e = bb84_ensemble();
    const PipelineResult r = run_pipeline(e);
    const SynthesisResult &s = r.synthesis;
    CHECK(unitarity_error(s.u1) <= 1e-10);
    CHECK(unitarity_error(s.u_total) <= 1e-10);
    CHECK(s.residual <= 1e-8);
    const ComplexMatrix initial = pad_rows(r.ladder.coeffs, 8);
    CHECK(max_abs(s.u1 * initial - r.final_config.states_f) < 1e-8);
    CHECK(max_abs(s.u_total * e.states - r.final_config.states_f) < 1e-8);
    CHECK(std::abs(s.a_prime.trace()) >= 0.0);
}

TEST_CASE("A' singular values are the Gram eigenvalues padded with zeros", "[synthesis][oracle]") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 3;
        const Ensemble e = random_detectable_ensemble(rng, n, n);
        const PipelineResult r = run_pipeline(e);
        const ComplexMatrix &ap = r.synthesis.a_prime;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> sq(ap * ap.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gram(gram_matrix(e.states));
        Eigen::VectorXd expected = Eigen::VectorXd::Zero(ap.rows());
        expected.tail(n) = gram.eigenvalues();
        const Eigen::VectorXd got = sq.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-7);
        // Tr(A' U1^dag) = N at the optimum
        CHECK(std::abs((ap * r.synthesis.u1.adjoint()).trace() - cd(n, 0.0)) < 1e-8);
    }
}

TEST_CASE("BB84 measurement statistics", "[synthesis]") {
    const PipelineResult r = run_pipeline(bb84_ensemble());
    for (int i = 1; i <= 4; ++i) {
        const RealVector probs = simulate_measurement(r.final_config, i);
        REQUIRE(probs.size() == 8);
        CHECK(std::abs(probs.sum() - 1.0) < 1e-12);
        for (int k = 1; k <= 4; ++k) {
            const double want = k == i ? 0.5 : 0.0;
            CHECK(std::abs(probs(k - 1) - want) < 1e-10);
        }
    }
    const RealVector first = simulate_measurement(r.final_config, 1);
    CHECK(std::abs(first(4) - 0.25) < 1e-8);
    CHECK(std::abs(first(5) - 0.25) < 1e-8);
    CHECK_THROWS_AS(simulate_measurement(r.final_config, 0), Error);
    CHECK_THROWS_AS(simulate_measurement(r.final_config, 5), Error);
}

TEST_CASE("measurement semantics on random ensembles", "[synthesis][property]") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;
        const PipelineResult r = run_pipeline(random_detectable_ensemble(rng, n, 2 * n));
        for (int i = 1; i <= n; ++i) {
            const RealVector probs = simulate_measurement(r.final_config, i);
            for (int k = 1; k <= n; ++k) {
                if (k == i)
                    CHECK(std::abs(probs(k - 1) - r.solution.p(i - 1)) <= 1e-8);
                else
                    CHECK(probs(k - 1) <= 1e-10);
            }
        }
    }
}

TEST_CASE("inconsistent final configuration is rejected", "[synthesis][error]") {
    const Ensemble e = bb84_ensemble();
    const PipelineResult r = run_pipeline(e);
    FinalConfiguration broken = r.final_config;
    broken.g(0) = 0.9;
    broken.states_f = assemble_states(broken.n, broken.ext_dim, broken.g);
    try {
        synthesize_u1(r.ladder, broken);
        FAIL("expected SynthesisFailure");
    } catch (const Error &err) {
        CHECK(err.code() == ErrorCode::SynthesisFailure);
        CHECK(err.module() == "synthesis");
    }
}
