#pragma once

#include <iosfwd>
#include <optional>
#include <string>

namespace usd {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitNumerical = 3,
    kExitVerify = 4,
};

struct SolveOptions {
    std::string input;
    std::string output;
    std::string format = "json";  // json | text
    std::optional<double> tol_unitary;
    std::optional<double> tol_gram;
};

int cmd_solve(const SolveOptions &opts, std::ostream &out, std::ostream &err);
int cmd_verify(const std::string &report_path, std::ostream &out, std::ostream &err);
int cmd_oracle(const std::string &input_path, double grid_step, std::ostream &out, std::ostream &err);

} // namespace usd
