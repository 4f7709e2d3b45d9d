#pragma once

// Command front end shared by the debond executable and the tests.
//
// Exit codes
//   0  success
//   1  a check or a verification failed
//   2  configuration error
//   3  other solver error
//   4  infeasible time horizon
//   5  dead end, violated constraint, C1 switch violation or no termination
//   6  continuity failure of a C1 synthesis

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "debond/errors.hpp"

namespace debond {

struct CommandOptions {
    std::string command;  // simulate | initial-branch | final-branch | check-admissible | synthesize | verify
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<double> h;
    std::optional<std::string> policy;
};

int exit_code_for(ErrorKind kind) noexcept;

/// Runs one command; progress goes to `out`, diagnostics to `err`.
int run_command(const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// 17 significant digits.
std::string format_number(double x);

}  // namespace debond
