#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace droplet {

/// One measured quantity inside a criterion; pass iff value <= bound.
struct SubCheck {
    std::string name;
    double value = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::string description;
    std::vector<SubCheck> checks;
    bool pass = false;
    double wall_seconds = 0.0;
    std::string error; // exception text when the criterion aborted
};

struct AcceptanceReport {
    std::vector<CriterionResult> results;
    bool all_pass() const;
    std::string to_json() const;
};

struct AcceptanceOptions {
    /// Run only criteria whose name contains one of these strings, or
    /// whose id matches a purely numeric entry. Empty: run all ten.
    std::vector<std::string> only;
    int threads = 1;
    std::ostream* log = nullptr; // progress lines, one per criterion
};

/// Executes the cross-validation suite at full scale (minutes, not hours).
AcceptanceReport run_acceptance(const AcceptanceOptions& opts = {});

} // namespace droplet
