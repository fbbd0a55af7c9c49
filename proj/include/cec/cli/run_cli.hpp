#ifndef CEC_CLI_RUN_CLI_HPP
#define CEC_CLI_RUN_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "cec/engine.hpp"

namespace cec::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUsageError = 2,
    kDataError = 3,
    kNumericalError = 4,
};

/**
 * Splits a --param value into one parameter list per type. Tokens are
 * separated by commas, semicolons or whitespace and consumed in type order:
 * fixedr takes one number, eigenvalues `dim` numbers, covariance dim*dim
 * numbers (row-major), and parameterless types optionally consume a "-"
 * placeholder. Throws ConfigError on missing or leftover tokens.
 */
std::vector<std::vector<double>> parse_params(const std::string& text, const std::vector<std::string>& types,
                                              std::size_t dim);

/// Runs the command line; argv[0] is the program name. Returns an ExitCode.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with arguments given without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cec::cli

#endif  // CEC_CLI_RUN_CLI_HPP
