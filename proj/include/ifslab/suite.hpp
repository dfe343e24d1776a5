#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ifslab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;     // deterministic: measured values only, never timings
    double seconds = 0;
    double time_limit = 0;  // 0 when the criterion has no runtime bound
};

/// Runs the bundled acceptance experiments. Criteria 1-10 run at one and at
/// eight threads; criterion 11 checks that both renderings are identical.
std::vector<CriterionResult> run_reference_suite(std::uint64_t seed = 1);

/// Fixed-width pass/fail table, one line per criterion.
std::string format_suite(const std::vector<CriterionResult>& results);

}  // namespace ifslab
