#pragma once

#include <string>
#include <vector>

namespace contattn {

struct CheckResult {
    std::string name;
    bool passed = false;
    double max_delta = 0.0;  // worst observed deviation
    double tolerance = 0.0;
    std::string detail;
};

// Runs the analytic/property acceptance suite. `filter` keeps only checks
// whose name contains the substring; empty runs everything. Checks never
// throw; failures (including unexpected exceptions) land in the result.
std::vector<CheckResult> run_all_checks(const std::string& filter = "");

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace contattn
