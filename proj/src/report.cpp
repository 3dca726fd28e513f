#include "usd/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "usd/error.hpp"
#include "usd/numerics.hpp"

namespace usd {

namespace {

constexpr const char *kModule = "report";

using nlohmann::json;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string fmt(double x) {
    if (std::abs(x) < 5e-5) x = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

std::string fmt(Complex z) {
    const double re = std::abs(z.real()) < 5e-5 ? 0.0 : z.real();
    const double im = std::abs(z.imag()) < 5e-5 ? 0.0 : z.imag();
    if (im == 0.0) return fmt(re);
    char buf[64];
    if (re == 0.0) {
        std::snprintf(buf, sizeof buf, "%.4fi", im);
    } else {
        std::snprintf(buf, sizeof buf, "%.4f%+.4fi", re, im);
    }
    return buf;
}

void print_matrix(std::ostringstream &out, const std::string &title, const ComplexMatrix &m) {
    out << title << " (" << m.rows() << "x" << m.cols() << ")\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << " ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const std::string cell = fmt(m(i, j));
            out << " " << std::string(cell.size() < 16 ? 16 - cell.size() : 0, ' ') << cell;
        }
        out << "\n";
    }
    out << "\n";
}

[[noreturn]] void malformed(const std::string &what) {
    throw Error(ErrorCode::ParseError, kModule, "report: " + what);
}

const json &field(const json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) malformed(std::string("missing '") + key + "'");
    return j[key];
}

double number(const json &j, const char *what) {
    if (!j.is_number()) malformed(std::string(what) + " must be a number");
    return j.get<double>();
}

Complex complex_from(const json &j) {
    if (!j.is_array() || j.size() != 2) malformed("complex values must be [re, im]");
    return {number(j[0], "re"), number(j[1], "im")};
}

} // namespace

json matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json &j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) malformed("matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) malformed("ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

json report_json(const PipelineResult &r, const Tolerances &tol) {
    const FinalConfiguration &fc = r.final_config;
    json amplitudes = json::array();
    for (Eigen::Index k = 0; k < fc.g.size(); ++k) amplitudes.push_back(complex_json(fc.g(k)));
    json layout = json::array();
    for (const AmplitudeRange &ar : fc.layout) {
        layout.push_back({{"state", ar.state}, {"first", ar.first}, {"count", ar.count}, {"first_ket", ar.first_ket}});
    }
    json steps = json::array();
    for (const RotationStep &s : r.rotations.steps) {
        Eigen::Matrix2cd block = plane_block(s.matrix, s.k, s.l);
        steps.push_back({{"k", s.k},
                         {"l", s.l},
                         {"identity", s.identity},
                         {"block", matrix_to_json(block)},
                         {"alpha", s.angles.alpha},
                         {"beta", s.angles.beta},
                         {"gamma_half", s.angles.gamma_half},
                         {"delta", s.angles.delta}});
    }
    json checks = json::array();
    json failed = json::array();
    for (const CheckResult &c : r.checks) {
        checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
        if (!c.passed) failed.push_back(c.name);
    }
    const UsdSolution &sol = r.solution;
    const PolynomialData &pd = fc.poly;
    return {
        {"status", r.ok() ? "ok" : "FAILED"},
        {"failed_checks", failed},
        {"ensemble", ensemble_to_json(r.ensemble)},
        {"ladder", {{"coefficients", matrix_to_json(r.ladder.coeffs)}}},
        {"solution",
         {{"p", std::vector<double>(sol.p.data(), sol.p.data() + sol.p.size())},
          {"total_pd", sol.total_pd},
          {"duality_gap", sol.duality_gap},
          {"iterations", sol.iterations}}},
        {"final_configuration",
         {{"n", fc.n},
          {"ext_dim", fc.ext_dim},
          {"amplitudes", amplitudes},
          {"layout", layout},
          {"pair_branch", std::string(to_string(fc.branch))},
          {"polynomial",
           {{"a", pd.a},
            {"b", pd.b},
            {"c", pd.c},
            {"d", pd.d},
            {"theta", pd.theta},
            {"coefficients", std::vector<double>(pd.coeffs.begin(), pd.coeffs.end())}}},
          {"states", matrix_to_json(fc.states_f)}}},
        {"matrices",
         {{"u0", matrix_to_json(r.ladder.u0)},
          {"u1", matrix_to_json(r.synthesis.u1)},
          {"u", matrix_to_json(r.synthesis.u_total)}}},
        {"synthesis_residual", r.synthesis.residual},
        {"rotations", {{"reconstruction_error", r.rotations.reconstruction_error}, {"steps", steps}}},
        {"checks", checks},
        {"tolerances",
         {{"unitarity", tol.unitarity},
          {"gram", tol.gram},
          {"feasibility", tol.feasibility},
          {"state_action", tol.state_action},
          {"measurement", tol.measurement},
          {"cross_talk", tol.cross_talk},
          {"reconstruction", tol.reconstruction},
          {"euler", tol.euler}}},
    };
}

std::string report_text(const PipelineResult &r) {
    std::ostringstream out;
    const FinalConfiguration &fc = r.final_config;
    out << "status: " << (r.ok() ? "ok" : "FAILED") << "\n";
    out << "N = " << r.ensemble.size() << ", d = " << r.ensemble.dim << ", extended dimension = " << fc.ext_dim
        << "\n\n";

    print_matrix(out, "ladder coefficients", r.ladder.coeffs);

    out << "conclusive probabilities\n";
    for (Eigen::Index i = 0; i < r.solution.p.size(); ++i) {
        out << "  p_" << i + 1 << " = " << fmt(r.solution.p(i)) << "   (mu = " << fmt(r.ensemble.priors(i)) << ")\n";
    }
    out << "  total P_D = " << fmt(r.solution.total_pd) << "\n\n";

    out << "amplitudes (pair branch: " << to_string(fc.branch) << ")\n";
    for (Eigen::Index k = 0; k < fc.g.size(); ++k) out << "  g_" << k + 1 << " = " << fmt(fc.g(k)) << "\n";
    out << "\n";

    print_matrix(out, "U0", r.ladder.u0);
    print_matrix(out, "U1", r.synthesis.u1);
    print_matrix(out, "U = U1 U0", r.synthesis.u_total);

    out << "two-level rotations (degrees)\n";
    out << "      step     alpha      beta   gamma/2     delta\n";
    for (const RotationStep &s : r.rotations.steps) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "  R_{%d,%d}%s %9s %9s %9s %9s\n", s.k, s.l, s.identity ? " (I)" : "    ",
                      fmt(s.angles.alpha).c_str(), fmt(s.angles.beta).c_str(), fmt(s.angles.gamma_half).c_str(),
                      fmt(s.angles.delta).c_str());
        out << buf;
    }
    out << "\nchecks\n";
    for (const CheckResult &c : r.checks) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "  %-26s %.3e <= %.1e  %s\n", c.name.c_str(), c.value, c.tolerance,
                      c.passed ? "ok" : "FAILED");
        out << buf;
    }
    return out.str();
}

std::vector<CheckResult> verify_report(const json &report) {
    Tolerances tol;
    if (report.is_object() && report.contains("tolerances")) {
        const json &t = report["tolerances"];
        if (t.contains("unitarity")) tol.unitarity = number(t["unitarity"], "unitarity tolerance");
        if (t.contains("gram")) tol.gram = number(t["gram"], "gram tolerance");
    }

    Ensemble e;
    try {
        e = load_ensemble(field(report, "ensemble"));
    } catch (const Error &err) {
        malformed(std::string("ensemble: ") + err.what());
    }
    const json &sol = field(report, "solution");
    const json &pj = field(sol, "p");
    if (!pj.is_array() || static_cast<Eigen::Index>(pj.size()) != e.size()) malformed("solution.p has wrong length");
    RealVector p(e.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) p(i) = number(pj[static_cast<std::size_t>(i)], "p");

    const json &fcj = field(report, "final_configuration");
    const int n = static_cast<int>(e.size());
    const int ext = static_cast<int>(number(field(fcj, "ext_dim"), "ext_dim"));
    if (ext < 2 * n - 1 || ext < e.dim) malformed("ext_dim too small");
    const json &aj = field(fcj, "amplitudes");
    if (!aj.is_array() || static_cast<int>(aj.size()) != amplitude_count(n)) malformed("wrong amplitude count");
    ComplexVector g(amplitude_count(n));
    for (Eigen::Index k = 0; k < g.size(); ++k) g(k) = complex_from(aj[static_cast<std::size_t>(k)]);
    const ComplexMatrix states_f = assemble_states(n, ext, g);

    const json &mj = field(report, "matrices");
    const ComplexMatrix u0 = matrix_from_json(field(mj, "u0"));
    const ComplexMatrix u1 = matrix_from_json(field(mj, "u1"));
    const ComplexMatrix u = matrix_from_json(field(mj, "u"));
    if (u0.rows() != e.dim || u1.rows() != ext || u.rows() != ext) malformed("matrix sizes disagree");

    std::vector<CheckResult> checks;
    checks.push_back(make_check("unitarity.u0", unitarity_error(u0), tol.unitarity));
    checks.push_back(make_check("unitarity.u1", unitarity_error(u1), tol.unitarity));
    checks.push_back(make_check("unitarity.u", unitarity_error(u), tol.unitarity));
    checks.push_back(make_check("composition", max_abs(u - u1 * embed_unitary(u0, ext)), tol.unitarity));

    double conclusive = 0.0;
    RealVector g_sq(n);
    for (int i = 0; i < n; ++i) {
        conclusive = std::max(conclusive, std::abs(g(i) - std::sqrt(std::max(p(i), 0.0))));
        g_sq(i) = std::norm(g(i));
    }
    checks.push_back(make_check("conclusive_amplitudes", conclusive, 1e-10));

    const ComplexMatrix gram = gram_matrix(e.states);
    try {
        const ReciprocalSet rec = reciprocal_states(ladder_coefficients(e));
        const double lo = hermitian_min_eigenvalue(inconclusive_operator(rec, g_sq), 1e-8);
        checks.push_back(make_check("feasibility", std::max(0.0, -lo), tol.feasibility));
    } catch (const Error &) {
        checks.push_back(make_check("feasibility", std::numeric_limits<double>::infinity(), tol.feasibility));
    }
    checks.push_back(make_check("gram_preservation", max_abs(gram_matrix(states_f) - gram), tol.gram));
    checks.push_back(make_check("state_mapping", max_abs(u * pad_rows(e.states, ext) - states_f), tol.state_action));
    const MeasurementDefect md = measurement_defect(states_f, p);
    checks.push_back(make_check("measurement.conclusive", md.conclusive, tol.measurement));
    checks.push_back(make_check("measurement.cross_talk", md.cross_talk, tol.cross_talk));

    const json &steps = field(field(report, "rotations"), "steps");
    if (!steps.is_array()) malformed("rotations.steps must be an array");
    RotationSequence seq;
    for (const json &sj : steps) {
        RotationStep s;
        s.k = static_cast<int>(number(field(sj, "k"), "k"));
        s.l = static_cast<int>(number(field(sj, "l"), "l"));
        if (s.k < 1 || s.l <= s.k || s.l > ext) malformed("rotation plane out of range");
        const ComplexMatrix block = matrix_from_json(field(sj, "block"));
        if (block.rows() != 2 || block.cols() != 2) malformed("rotation block must be 2x2");
        s.matrix = ComplexMatrix::Identity(ext, ext);
        s.matrix(s.k - 1, s.k - 1) = block(0, 0);
        s.matrix(s.k - 1, s.l - 1) = block(0, 1);
        s.matrix(s.l - 1, s.k - 1) = block(1, 0);
        s.matrix(s.l - 1, s.l - 1) = block(1, 1);
        s.angles = {number(field(sj, "alpha"), "alpha"), number(field(sj, "beta"), "beta"),
                    number(field(sj, "gamma_half"), "gamma_half"), number(field(sj, "delta"), "delta")};
        seq.steps.push_back(std::move(s));
    }
    const double expected_steps = ext * (ext - 1) / 2.0;
    checks.push_back(make_check("rotation_count", std::abs(static_cast<double>(seq.steps.size()) - expected_steps), 0.0));
    checks.push_back(make_check("rotation_reconstruction", (rotation_product(seq, ext) - u).norm(), tol.reconstruction));
    checks.push_back(make_check("euler_roundtrip", euler_roundtrip_error(seq), tol.euler));
    return checks;
}

} // namespace usd
