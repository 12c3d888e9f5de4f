#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace viscowave::acceptance {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail; // one-line diagnostic, filled on pass and fail alike
    double seconds = 0.0;
};

std::vector<int> all_indices(); // 1..10

// Runs one criterion; exceptions are caught by run_suite, not here.
CriterionResult run_criterion(int index);

// run_criterion with exceptions converted into a failed result.
CriterionResult run_criterion_guarded(int index);

// "PASS criterion N: name [X.X s] detail"
std::string format_line(const CriterionResult& res);

// Prints one "PASS criterion N: ..." or "FAIL criterion N: ..." line per
// entry and returns the number of failures.
int run_suite(const std::vector<int>& indices, std::ostream& out);

} // namespace viscowave::acceptance
