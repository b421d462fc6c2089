#ifndef FUNNEL_VERIFY_HPP
#define FUNNEL_VERIFY_HPP

#include <string>
#include <vector>

namespace funnel::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Acceptance criteria 1..8, each as a list of named checks with measured
// margins in the detail string.
std::vector<CheckResult> acceptance_criterion(int k);

const std::vector<std::string>& suite_names();

// Suites: closed-forms, funnel, decode, extension, interval. Throws
// SchemaError on an unknown name.
std::vector<CheckResult> run_suite(const std::string& name);

} // namespace funnel::verify

#endif
