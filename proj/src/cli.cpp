#include "usd/cli.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "usd/error.hpp"
#include "usd/report.hpp"

namespace usd {

namespace {

int report_error(const Error &e, std::ostream &err) {
    err << "error [" << e.module() << "] " << e.what() << "\n";
    return is_validation_error(e.code()) ? kExitValidation : kExitNumerical;
}

} // namespace

int cmd_solve(const SolveOptions &opts, std::ostream &out, std::ostream &err) {
    if (opts.format != "json" && opts.format != "text") {
        err << "error [cli] InvalidInput: unknown format '" << opts.format << "'\n";
        return kExitValidation;
    }
    Tolerances tol;
    if (opts.tol_unitary) tol.unitarity = *opts.tol_unitary;
    if (opts.tol_gram) tol.gram = *opts.tol_gram;

    PipelineResult result;
    try {
        result = run_pipeline(load_ensemble_file(opts.input, tol), tol);
    } catch (const Error &e) {
        return report_error(e, err);
    }

    const std::string body =
        opts.format == "json" ? report_json(result, tol).dump(2) + "\n" : report_text(result);
    std::ofstream file(opts.output);
    if (!file || !(file << body)) {
        err << "error [cli] InvalidInput: cannot write " << opts.output << "\n";
        return kExitValidation;
    }

    out << "P_D = " << result.solution.total_pd << "\n";
    if (!result.ok()) {
        for (const CheckResult &c : result.checks) {
            if (!c.passed) err << "check failed: " << c.name << " = " << c.value << " > " << c.tolerance << "\n";
        }
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_verify(const std::string &report_path, std::ostream &out, std::ostream &err) {
    std::vector<CheckResult> checks;
    try {
        std::ifstream in(report_path);
        if (!in) throw Error(ErrorCode::ParseError, "cli", "cannot open " + report_path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception &ex) {
            throw Error(ErrorCode::ParseError, "cli", std::string("report is not JSON: ") + ex.what());
        }
        checks = verify_report(doc);
    } catch (const Error &e) {
        return report_error(e, err);
    }
    bool ok = true;
    for (const CheckResult &c : checks) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-26s %.3e <= %.1e  %s\n", c.name.c_str(), c.value, c.tolerance,
                      c.passed ? "ok" : "FAILED");
        out << buf;
        if (!c.passed) {
            ok = false;
            err << "verification failed: " << c.name << "\n";
        }
    }
    return ok ? kExitOk : kExitVerify;
}

int cmd_oracle(const std::string &input_path, double grid_step, std::ostream &out, std::ostream &err) {
    try {
        const Ensemble e = load_ensemble_file(input_path);
        const ReciprocalSet rec = reciprocal_states(ladder_coefficients(e));
        const UsdSolution oracle = oracle_usd(e, rec, grid_step);
        const UsdSolution solver = solve_usd(e, rec);
        const auto print = [&](const char *label, const UsdSolution &s) {
            out << label << " P_D = " << s.total_pd << "  p =";
            for (Eigen::Index i = 0; i < s.p.size(); ++i) out << " " << s.p(i);
            out << "\n";
        };
        print("oracle", oracle);
        print("solver", solver);
        out << "gap = " << std::abs(solver.total_pd - oracle.total_pd) << "\n";
    } catch (const Error &e) {
        return report_error(e, err);
    }
    return kExitOk;
}

} // namespace usd
