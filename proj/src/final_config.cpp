#include "usd/final_config.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "usd/error.hpp"

namespace usd {

namespace {

constexpr const char *kModule = "final_config";

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// 0-based position in g of state s (1-based) at ket offset m.
Eigen::Index slot(int n, int s, int m) { return amplitude_range(n, s).first - 1 + m; }

struct PairSolver {
    const PolynomialData &data;
    double tol;

    [[nodiscard]] bool accepts(Complex u, Complex v) const {
        const Complex w(data.c, data.d);
        return std::abs(std::conj(u) * v - w) <= tol && std::abs(std::norm(u) - data.a) <= tol &&
               std::abs(std::norm(v) - data.b) <= tol;
    }

    [[nodiscard]] std::optional<std::pair<Complex, Complex>> from_polynomial() const {
        const double a = data.a;
        const double b = data.b;
        const double c = data.c;
        if (a <= 0.0) return std::nullopt;
        std::vector<Complex> ys;
        try {
            ys = even_polynomial_squared_roots(data.coeffs);
        } catch (const Error &) {
            return std::nullopt;
        }
        std::vector<double> admissible;
        for (const Complex &y : ys) {
            if (std::abs(y.imag()) > 1e-8 * std::max(1.0, std::abs(y))) continue;
            if (y.real() < -1e-10 || y.real() > a + 1e-10) continue;
            admissible.push_back(std::clamp(y.real(), 0.0, a));
        }
        std::sort(admissible.begin(), admissible.end());
        for (double y : admissible) {
            for (double xs : {1.0, -1.0}) {
                const double x = xs * std::sqrt(y);
                double disc = 4.0 * c * c * x * x - 4.0 * a * (b * x * x + c * c - a * b);
                if (disc < 0.0) {
                    if (disc < -1e-10) continue;
                    disc = 0.0;
                }
                for (double ds : {1.0, -1.0}) {
                    const double v_im = (2.0 * c * x + ds * std::sqrt(disc)) / (2.0 * a);
                    const double v_re_sq = b - v_im * v_im;
                    const double u_re_sq = a - x * x;
                    if (v_re_sq < -1e-10 || u_re_sq < -1e-10) continue;
                    const double v_re = std::sqrt(std::max(0.0, v_re_sq));
                    const double u_re = std::sqrt(std::max(0.0, u_re_sq));
                    for (double su : {1.0, -1.0}) {
                        for (double sv : {1.0, -1.0}) {
                            const Complex u(su * u_re, x);
                            const Complex v(sv * v_re, v_im);
                            if (accepts(u, v)) return std::make_pair(u, v);
                        }
                    }
                }
            }
        }
        return std::nullopt;
    }
};

} // namespace

std::string_view to_string(PairBranch branch) {
    switch (branch) {
    case PairBranch::Vanishing: return "vanishing";
    case PairBranch::TwoState: return "two_state";
    case PairBranch::RealOverlap: return "real_overlap";
    case PairBranch::ImaginaryOverlap: return "imaginary_overlap";
    case PairBranch::Polynomial: return "polynomial";
    case PairBranch::RankOne: return "rank_one";
    }
    return "unknown";
}

int neumark_dimension(int n, int d) { return std::max(d, 2 * n - 1); }

int amplitude_count(int n) { return n * (n + 3) / 2 - 1; }

AmplitudeRange amplitude_range(int n, int state) {
    if (state < 1 || state > n) {
        throw Error(ErrorCode::InvalidInput, kModule, "state index " + std::to_string(state) + " out of range");
    }
    AmplitudeRange r;
    r.state = state;
    r.first_ket = n + 1;
    if (state == 1) {
        r.first = n + 1;
        r.count = n - 1;
    } else {
        r.first = state * (2 * n + 3 - state) / 2 - 1;
        r.count = n + 1 - state;
    }
    return r;
}

EvenOcticCoefficients polynomial_coefficients(double a, double b, double c, double d) {
    const double k = c * c - a * b;
    const double c2 = c * c;
    const double d2 = d * d;
    const double p = a * a * d2 * d2 + a * a * k * k - 2.0 * d2 * a * a * k;
    const double lead_minus = (4.0 * d2 - 4.0 * a * b) * k - 4.0 * c2 * d2;
    const double lead_plus = (4.0 * d2 - 4.0 * a * b) * k + 4.0 * c2 * d2;
    const double q = 4.0 * a * a * b * (k - d2);
    EvenOcticCoefficients out{};
    out[0] = lead_minus * lead_minus;
    out[1] = lead_plus * (2.0 * q) - 64.0 * c2 * d2 * k * (2.0 * a * a * b);
    out[2] = p * lead_plus + q * q + 64.0 * c2 * d2 * k * (d2 + a * b) * a * a;
    out[3] = p * q;
    out[4] = p * p;
    return out;
}

PolynomialData compute_polynomial_data(const ComplexMatrix &coeffs, const ComplexVector &g, const Tolerances &tol) {
    const auto n = static_cast<int>(coeffs.cols());
    if (g.size() != amplitude_count(n)) {
        throw Error(ErrorCode::InvalidInput, kModule, "amplitude vector has the wrong length");
    }
    const ComplexMatrix gram = coeffs.adjoint() * coeffs;
    PolynomialData out;
    double a = gram(0, 0).real() - std::norm(g(0));
    double b = gram(1, 1).real() - std::norm(g(1));
    Complex w = gram(0, 1);
    for (int m = 0; m + 2 < n; ++m) {
        const Complex u = g(slot(n, 1, m));
        const Complex v = g(slot(n, 2, m));
        a -= std::norm(u);
        b -= std::norm(v);
        w -= std::conj(u) * v;
    }
    if (a < -tol.feasibility || b < -tol.feasibility) {
        std::ostringstream msg;
        msg << "remaining norms a = " << a << ", b = " << b << " are negative";
        throw Error(ErrorCode::InconsistentAmplitudes, kModule, msg.str());
    }
    out.a = std::max(a, 0.0);
    out.b = std::max(b, 0.0);
    out.c = w.real();
    out.d = w.imag();
    if (n >= 3) {
        out.theta = (std::arg(coeffs(1, 2)) - std::arg(coeffs(0, 2))) - (std::arg(coeffs(1, 1)) - std::arg(coeffs(0, 1)));
    }
    out.coeffs = polynomial_coefficients(out.a, out.b, out.c, out.d);
    return out;
}

ComplexMatrix assemble_states(int n, int ext_dim, const ComplexVector &g) {
    ComplexMatrix states = ComplexMatrix::Zero(ext_dim, n);
    for (int s = 1; s <= n; ++s) {
        states(s - 1, s - 1) = g(s - 1);
        const AmplitudeRange r = amplitude_range(n, s);
        for (int m = 0; m < r.count; ++m) states(r.first_ket - 1 + m, s - 1) = g(r.first - 1 + m);
    }
    return states;
}

FinalConfiguration build_final_configuration(const ComplexMatrix &coeffs, const UsdSolution &sol, int ext_dim,
                                             const Tolerances &tol) {
    const auto n = static_cast<int>(coeffs.cols());
    if (n < 2 || coeffs.rows() != n || sol.p.size() != n) {
        throw Error(ErrorCode::InvalidInput, kModule, "ladder coefficients and solution sizes disagree");
    }
    if (ext_dim < 2 * n - 1) {
        throw Error(ErrorCode::InvalidInput, kModule, "extended dimension below 2N-1");
    }
    for (int i = 0; i < n; ++i) {
        if (!(sol.p(i) > tol.conclusive_floor)) {
            std::ostringstream msg;
            msg << "state " << i + 1 << " has conclusive probability " << sol.p(i);
            throw Error(ErrorCode::DegenerateConclusiveAmplitude, kModule, msg.str());
        }
    }

    const ComplexMatrix gram = coeffs.adjoint() * coeffs;
    ComplexVector g = ComplexVector::Zero(amplitude_count(n));
    for (int i = 0; i < n; ++i) g(i) = std::sqrt(sol.p(i));

    auto amp = [&](int s, int m) -> Complex & { return g(slot(n, s, m)); };

    // Amplitude of state s at offset m, forced by its overlap with state k
    // whose leading (real) amplitude sits at that offset.
    auto solve_entry = [&](int s, int k, int m) {
        Complex num = gram(k - 1, s - 1);
        for (int mm = 0; mm < m; ++mm) num -= std::conj(amp(k, mm)) * amp(s, mm);
        const double pivot = amp(k, m).real();
        if (pivot < tol.pivot) {
            if (std::abs(num) <= 1e-10) return Complex(0.0, 0.0);
            std::ostringstream msg;
            msg << "state " << k << " has leading inconclusive amplitude " << pivot
                << " but its overlap with state " << s << " leaves " << std::abs(num);
            throw Error(ErrorCode::RecursionBreakdown, kModule, msg.str());
        }
        return num / pivot;
    };
    auto leading = [&](int s, int m) {
        double rest = gram(s - 1, s - 1).real() - sol.p(s - 1);
        for (int mm = 0; mm < m; ++mm) rest -= std::norm(amp(s, mm));
        if (rest < -tol.feasibility) {
            std::ostringstream msg;
            msg << "state " << s << " has negative remaining norm " << rest;
            throw Error(ErrorCode::InconsistentAmplitudes, kModule, msg.str());
        }
        return Complex(std::sqrt(std::max(rest, 0.0)), 0.0);
    };

    // State k's leading amplitude sits at offset N - k.
    for (int s = n; s >= 3; --s) {
        for (int m = 0; m < n - s; ++m) amp(s, m) = solve_entry(s, n - m, m);
        amp(s, n - s) = leading(s, n - s);
    }
    for (int s = 1; s <= 2; ++s) {
        for (int m = 0; m < n - 2; ++m) amp(s, m) = solve_entry(s, n - m, m);
    }

    FinalConfiguration fc;
    fc.n = n;
    fc.ext_dim = ext_dim;
    fc.poly = compute_polynomial_data(coeffs, g, tol);
    for (int s = 1; s <= n; ++s) fc.layout.push_back(amplitude_range(n, s));

    const PolynomialData &pd = fc.poly;
    const PairSolver solver{pd, tol.gram};
    const Complex w(pd.c, pd.d);
    std::optional<std::pair<Complex, Complex>> pair;
    auto attempt = [&](PairBranch branch, Complex u, Complex v) {
        if (!pair && solver.accepts(u, v)) {
            pair = std::make_pair(u, v);
            fc.branch = branch;
        }
    };

    if (pd.a + pd.b <= tol.vanishing_pair) attempt(PairBranch::Vanishing, 0.0, 0.0);
    if (!pair && n == 2) {
        if (pd.b > tol.pivot) {
            const double vb = std::sqrt(pd.b);
            attempt(PairBranch::TwoState, std::conj(w) / vb, vb);
        } else {
            attempt(PairBranch::TwoState, std::sqrt(pd.a), 0.0);
        }
    }
    if (!pair && std::abs(pd.d) <= tol.branch) {
        attempt(PairBranch::RealOverlap, std::sqrt(pd.a), sign_of(pd.c) * std::sqrt(pd.b));
    }
    if (!pair && std::abs(pd.c) <= tol.branch) {
        attempt(PairBranch::ImaginaryOverlap, Complex(0.0, -sign_of(pd.d) * std::sqrt(pd.a)), std::sqrt(pd.b));
    }
    if (!pair) {
        if (auto found = solver.from_polynomial()) attempt(PairBranch::Polynomial, found->first, found->second);
    }
    if (!pair) {
        if (pd.a >= pd.b && pd.a > 0.0) {
            const double ua = std::sqrt(pd.a);
            attempt(PairBranch::RankOne, ua, w / ua);
        } else if (pd.b > 0.0) {
            const double vb = std::sqrt(pd.b);
            attempt(PairBranch::RankOne, std::conj(w) / vb, vb);
        }
    }
    if (!pair) {
        std::ostringstream msg;
        msg << "no admissible real root for the last amplitude pair (a = " << pd.a << ", b = " << pd.b
            << ", c = " << pd.c << ", d = " << pd.d << "); check input states, they may be nearly dependent";
        throw Error(ErrorCode::NoRealRoot, kModule, msg.str());
    }
    amp(1, n - 2) = pair->first;
    amp(2, n - 2) = pair->second;

    fc.g = g;
    fc.states_f = assemble_states(n, ext_dim, g);
    return fc;
}

} // namespace usd
