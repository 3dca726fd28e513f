// usd: optimal unambiguous discrimination of pure states.
//
//   usd solve  --input states.json --output report.json [--format json|text]
//   usd verify --report report.json
//   usd oracle --input states.json --grid-step 1e-3

#include <iostream>

#include <CLI11.hpp>

#include "usd/cli.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Unambiguous state discrimination via Neumark extension"};
    app.require_subcommand(1);

    usd::SolveOptions solve;
    double tol_unitary = 0.0;
    double tol_gram = 0.0;
    auto *solve_cmd = app.add_subcommand("solve", "Run the full pipeline and write a report");
    solve_cmd->add_option("--input", solve.input, "Ensemble document")->required();
    solve_cmd->add_option("--output", solve.output, "Report path")->required();
    solve_cmd->add_option("--format", solve.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    auto *tu = solve_cmd->add_option("--tol-unitary", tol_unitary, "Unitarity tolerance");
    auto *tg = solve_cmd->add_option("--tol-gram", tol_gram, "Gram preservation tolerance");

    std::string report;
    auto *verify_cmd = app.add_subcommand("verify", "Recheck a JSON report");
    verify_cmd->add_option("--report", report, "Report path")->required();

    std::string oracle_input;
    double grid_step = 1e-3;
    auto *oracle_cmd = app.add_subcommand("oracle", "Compare the solver with a grid search (N <= 3)");
    oracle_cmd->add_option("--input", oracle_input, "Ensemble document")->required();
    oracle_cmd->add_option("--grid-step", grid_step, "Grid spacing")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : usd::kExitValidation;
    }

    if (*solve_cmd) {
        if (*tu) solve.tol_unitary = tol_unitary;
        if (*tg) solve.tol_gram = tol_gram;
        return usd::cmd_solve(solve, std::cout, std::cerr);
    }
    if (*verify_cmd) return usd::cmd_verify(report, std::cout, std::cerr);
    return usd::cmd_oracle(oracle_input, grid_step, std::cout, std::cerr);
}
