#include <catch2/catch.hpp>

#include "support.hpp"
#include "usd/error.hpp"
#include "usd/ladder.hpp"
#include "usd/numerics.hpp"
#include "usd/pipeline.hpp"

using namespace usd;
using namespace usd::testing;

namespace {

FinalConfiguration configure(const Ensemble &e) {
    const ComplexMatrix c = ladder_coefficients(e);
    const UsdSolution sol = solve_usd(e, reciprocal_states(c));
    return build_final_configuration(c, sol, neumark_dimension(static_cast<int>(e.size()), static_cast<int>(e.dim)));
}

// Three states with every overlap s * e^{i phi}.
Ensemble complex_trine(double s, double phi) {
    const cd w = std::polar(s, phi);
    Eigen::Matrix3cd g;
    g << 1.0, w, w, std::conj(w), 1.0, w, std::conj(w), std::conj(w), 1.0;
    const Eigen::Matrix3cd upper = g.llt().matrixU();
    return make_ensemble(upper, Eigen::Vector3d::Constant(1.0 / 3.0));
}

ErrorCode code_of_config(const ComplexMatrix &c, const Eigen::VectorXd &p) {
    UsdSolution sol;
    sol.p = p;
    try {
        build_final_configuration(c, sol, 2 * static_cast<int>(c.cols()) - 1);
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("configuration was accepted");
    return ErrorCode::InvalidInput;
}

} // namespace

TEST_CASE("amplitude layout", "[final_config]") {
    CHECK(amplitude_count(2) == 4);
    CHECK(amplitude_count(3) == 8);
    CHECK(amplitude_count(4) == 13);
    CHECK(neumark_dimension(4, 8) == 8);
    CHECK(neumark_dimension(3, 3) == 5);
    CHECK(neumark_dimension(2, 2) == 3);

    // N = 4: g5..g7 | g8..g10 | g11..g12 | g13
    const int first[] = {5, 8, 11, 13};
    const int count[] = {3, 3, 2, 1};
    for (int s = 1; s <= 4; ++s) {
        const AmplitudeRange r = amplitude_range(4, s);
        CHECK(r.first == first[s - 1]);
        CHECK(r.count == count[s - 1]);
        CHECK(r.first_ket == 5);
    }
    // every amplitude index appears exactly once for several N
    for (int n = 2; n <= 7; ++n) {
        std::vector<int> seen(static_cast<std::size_t>(amplitude_count(n) + 1), 0);
        for (int k = 1; k <= n; ++k) ++seen[static_cast<std::size_t>(k)];
        for (int s = 1; s <= n; ++s) {
            const AmplitudeRange r = amplitude_range(n, s);
            CHECK(r.first_ket + r.count - 1 <= 2 * n - 1);
            for (int m = 0; m < r.count; ++m) ++seen[static_cast<std::size_t>(r.first + m)];
        }
        for (int k = 1; k <= amplitude_count(n); ++k) CHECK(seen[static_cast<std::size_t>(k)] == 1);
    }
    CHECK_THROWS_AS(amplitude_range(3, 4), Error);
}

TEST_CASE("BB84 final amplitudes", "[final_config]") {
    const FinalConfiguration fc = configure(bb84_ensemble());
    const ComplexVector &g = fc.g;
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(g(k - 1) - std::sqrt(0.5)) < 1e-4);
    for (int k : {5, 6, 8, 9}) CHECK(std::abs(std::abs(g(k - 1)) - 0.5) < 1e-3);
    for (int k : {7, 10, 11}) CHECK(std::abs(g(k - 1)) < 1e-6);
    for (int k : {12, 13}) CHECK(std::abs(g(k - 1) - 0.7071) < 1e-3);
    CHECK(fc.ext_dim == 8);
    CHECK(fc.branch == PairBranch::Vanishing);
    CHECK(max_abs(gram_matrix(fc.states_f) - gram_matrix(bb84_states())) < 1e-8);
}

TEST_CASE("orthonormal input needs no inconclusive mass", "[final_config]") {
    const FinalConfiguration fc = configure(make_ensemble(ComplexMatrix::Identity(3, 3), Eigen::Vector3d::Constant(1.0 / 3.0)));
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(fc.g(k - 1) - 1.0) < 1e-8);
    for (int k = 4; k <= 8; ++k) CHECK(std::abs(fc.g(k - 1)) < 1e-4);
    CHECK(max_abs(gram_matrix(fc.states_f) - ComplexMatrix::Identity(3, 3)) < 1e-8);
}

TEST_CASE("real trine uses the real-overlap branch", "[final_config]") {
    const Ensemble e = symmetric_trine(-0.3);
    const FinalConfiguration fc = configure(e);
    CHECK(fc.branch == PairBranch::RealOverlap);
    CHECK(std::abs(fc.poly.d) < 1e-9);
    CHECK(max_abs(gram_matrix(fc.states_f) - gram_matrix(e.states)) < 1e-8);
}

TEST_CASE("two states", "[final_config]") {
    const Ensemble e = two_state(0.4);
    const FinalConfiguration fc = configure(e);
    CHECK(fc.branch == PairBranch::TwoState);
    CHECK(fc.ext_dim == 3);
    CHECK(max_abs(gram_matrix(fc.states_f) - gram_matrix(e.states)) < 1e-8);
}

TEST_CASE("polynomial coefficients against a term-by-term expansion", "[final_config][oracle]") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = std::abs(u(rng)), b = std::abs(u(rng)), c = u(rng), d = u(rng);
        // written out term by term, c^2 - ba kept in that order
        const double A = std::pow((4 * d * d - 4 * a * b) * (c * c - a * b) - 4 * c * c * d * d, 2);
        const double B = ((4 * d * d - 4 * a * b) * (c * c - a * b) + 4 * c * c * d * d) *
                             (8 * a * a * b * (c * c - a * b - d * d)) -
                         64 * c * c * d * d * (c * c - a * b) * (2 * a * a * b);
        const double P = a * a * std::pow(d, 4) + a * a * std::pow(c * c - a * b, 2) - 2 * d * d * a * a * (c * c - a * b);
        const double C = P * ((4 * d * d - 4 * a * b) * (c * c - a * b) + 4 * c * c * d * d) +
                         std::pow(4 * a * a * b * (c * c - b * a - d * d), 2) +
                         64 * c * c * d * d * (c * c - a * b) * (d * d + a * b) * a * a;
        const double D = P * (4 * a * a * b * (c * c - b * a - d * d));
        const double E = P * P;
        const EvenOcticCoefficients k = polynomial_coefficients(a, b, c, d);
        const double want[5] = {A, B, C, D, E};
        for (int i = 0; i < 5; ++i) CHECK(k[static_cast<std::size_t>(i)] == Approx(want[i]).epsilon(1e-12).margin(1e-14));
    }
}

TEST_CASE("polynomial degenerates for real consistent data", "[final_config]") {
    const EvenOcticCoefficients k = polynomial_coefficients(0.5, 0.5, -0.5, 0.0);
    for (double x : k) CHECK(std::abs(x) < 1e-15);
    CHECK_THROWS_AS(even_polynomial_squared_roots(k), Error);
}

TEST_CASE("complex trine goes through the polynomial branch", "[final_config]") {
    for (double phi : {std::numbers::pi / 2.0, 2.0 * std::numbers::pi / 3.0}) {
        const Ensemble e = complex_trine(0.3, phi);
        const FinalConfiguration fc = configure(e);
        REQUIRE(fc.branch == PairBranch::Polynomial);
        const PolynomialData &pd = fc.poly;
        // chosen Im(u) is a root with 0 <= x^2 <= a
        const Complex u = fc.g(2 * 3 - 2);
        CHECK(u.imag() * u.imag() <= pd.a + 1e-10);
        double scale = 0.0;
        for (double x : pd.coeffs) scale = std::max(scale, std::abs(x));
        CHECK(std::abs(evaluate_even_polynomial(pd.coeffs, u.imag())) <= 1e-7 * scale);
        // a sign-change scan finds admissible roots too
        const double reach = std::sqrt(pd.a);
        const auto scanned = scan_real_roots(pd.coeffs, -reach, reach, reach / 4000.0);
        CHECK_FALSE(scanned.empty());
        bool near = false;
        for (double x : scanned) near = near || std::abs(std::abs(x) - std::abs(u.imag())) < 1e-3;
        CHECK(near);
        CHECK(max_abs(gram_matrix(fc.states_f) - gram_matrix(e.states)) < 1e-8);
    }
}

TEST_CASE("orthogonal leading pair gives c = d = 0", "[final_config]") {
    ComplexMatrix s = ComplexMatrix::Zero(3, 3);
    s(0, 0) = 1.0;
    s(1, 1) = 1.0;
    s(0, 2) = 0.5;
    s(1, 2) = cd(0.0, 0.5);
    s(2, 2) = std::sqrt(0.5);
    ComplexVector g = ComplexVector::Zero(amplitude_count(3));
    g(0) = g(1) = g(2) = std::sqrt(0.3);
    const PolynomialData pd = compute_polynomial_data(s, g);
    CHECK(std::abs(pd.c) < 1e-15);
    CHECK(std::abs(pd.d) < 1e-15);
    CHECK(std::abs(pd.a - 0.7) < 1e-15);
    CHECK(std::abs(pd.b - 0.7) < 1e-15);
}

TEST_CASE("a real first overlap keeps theta at zero", "[final_config]") {
    const FinalConfiguration fc = configure(symmetric_trine(0.25));
    CHECK(std::abs(fc.poly.theta) < 1e-12);
    CHECK(std::abs(fc.poly.d) < 1e-9);
}

TEST_CASE("final states preserve the Gram matrix on random ensembles", "[final_config][property]") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 3;
        const Ensemble e = random_detectable_ensemble(rng, n, n + trial % 2 * n);
        const FinalConfiguration fc = configure(e);
        CHECK(max_abs(gram_matrix(fc.states_f) - gram_matrix(e.states)) < 1e-8);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(fc.states_f(i, i).imag()) == 0.0);
            for (int k = 0; k < n; ++k)
                if (k != i) CHECK(fc.states_f(k, i) == Complex(0.0, 0.0));
        }
    }
}

TEST_CASE("final configuration failures are typed", "[final_config][error]") {
    const ComplexMatrix c = ladder_coefficients(symmetric_trine(-0.3));
    CHECK(code_of_config(c, Eigen::Vector3d(0.4, 0.0, 0.4)) == ErrorCode::DegenerateConclusiveAmplitude);
    // sub-optimal but feasible p leaves no admissible pair
    CHECK(code_of_config(c, Eigen::Vector3d::Constant(0.3)) == ErrorCode::NoRealRoot);
    // more conclusive mass than a state holds
    CHECK(code_of_config(c, Eigen::Vector3d(0.4, 0.4, 1.2)) == ErrorCode::InconsistentAmplitudes);
}
