#pragma once

/// @file hillvar/cli.hpp
/// @brief Command-line configuration and dispatch for the hillvar tool.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hillvar/exactnum.hpp"

namespace hillvar {

enum class Command { coeffs, certify, critical_m, bound, orbit, report, residual };
enum class OutputFormat { table, json, csv };

std::string to_string(Command c);

/// Bad flags, missing or malformed values.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::report;
    std::optional<Rational> m;
    /// Unset means lambda = m^2.
    std::optional<Rational> lambda;
    int J = 8;
    int N = 2;
    int n = 2;
    int digits = 10;
    Rational tol = pow10_neg(12);
    OutputFormat format = OutputFormat::table;
    /// Empty means standard output.
    std::string out;
    std::optional<Rational> complex_radius;
    int samples = 360;
    Rational a{1};
    /// Set when --help was requested; holds the help text.
    std::optional<std::string> help;

    /// lambda with the m^2 default applied. Throws UsageError without m.
    Rational resolved_lambda() const;
};

/// argv[0] is the program name. Throws UsageError.
RunConfig parse_config(const std::vector<std::string>& args);

struct RunResult {
    /// 0 success, 2 failed or indeterminate certification, 1 error.
    int exit_code = 0;
    std::string output;
};

/// Runs the command and returns the artifact text; does not write files.
RunResult execute(const RunConfig& cfg);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Full front end: parse, execute, write the artifact (stdout or --out), and
/// map errors to exit code 1 with a message on err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hillvar
