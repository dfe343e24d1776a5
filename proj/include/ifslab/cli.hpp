#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ifslab::cli {

inline constexpr const char* kToolName = "ifslab";
inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kSuccess = 0, kMismatch = 1, kInputError = 2 };

/// Everything that determines an experiment's output, echoed into every artifact.
struct ExperimentConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::string output;  // empty: standard output
    std::uint64_t seed = 1;
};

/// Comment lines ("# ...") heading CSV artifacts.
std::string csv_header(const ExperimentConfig& config);

/// Runs one subcommand. `args` excludes the program name.
int run_experiment(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ifslab::cli
