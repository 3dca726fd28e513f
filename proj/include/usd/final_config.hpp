#pragma once

#include <string_view>
#include <vector>

#include "usd/common.hpp"
#include "usd/numerics.hpp"
#include "usd/usd_sdp.hpp"

namespace usd {

/// Inconclusive amplitudes of one state: g_first ... g_{first+count-1} sit on
/// kets first_ket ... first_ket+count-1. All indices 1-based.
struct AmplitudeRange {
    int state = 0;
    int first = 0;
    int count = 0;
    int first_ket = 0;
};

/// How the last shared pair g_{2N-1}, g_{3N-2} was fixed.
enum class PairBranch {
    Vanishing,        // a + b ~ 0: both zero
    TwoState,         // N = 2: fixed from normalization and the one overlap
    RealOverlap,      // d ~ 0
    ImaginaryOverlap, // c ~ 0
    Polynomial,       // admissible real root of the even octic
    RankOne,          // larger of the two anchored real, other from the overlap
};

std::string_view to_string(PairBranch branch);

/// Scalars of the coupled system for the last pair:
/// |u|^2 = a, |v|^2 = b, conj(u) v = c + i d. coeffs holds A..E.
struct PolynomialData {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double theta = 0.0;
    EvenOcticCoefficients coeffs{};
};

struct FinalConfiguration {
    int n = 0;
    int ext_dim = 0;
    ComplexVector g;  // g(k - 1) is g_k
    std::vector<AmplitudeRange> layout;  // one entry per state
    ComplexMatrix states_f;  // ext_dim x N
    PairBranch branch = PairBranch::Vanishing;
    PolynomialData poly;
};

int neumark_dimension(int n, int d);

/// N(N+3)/2 - 1.
int amplitude_count(int n);

AmplitudeRange amplitude_range(int n, int state);

/// A..E of the even octic in Im(g_{2N-1}).
EvenOcticCoefficients polynomial_coefficients(double a, double b, double c, double d);

/// a, b, c + i d from the ladder Gram matrix and every amplitude except the
/// final pair (entries of g at those two positions are ignored).
PolynomialData compute_polynomial_data(const ComplexMatrix &coeffs, const ComplexVector &g,
                                       const Tolerances &tol = {});

/// Places g into ext_dim-dimensional vectors following the layout.
ComplexMatrix assemble_states(int n, int ext_dim, const ComplexVector &g);

FinalConfiguration build_final_configuration(const ComplexMatrix &coeffs, const UsdSolution &sol, int ext_dim,
                                             const Tolerances &tol = {});

} // namespace usd
