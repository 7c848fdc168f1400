#pragma once

#include <string>
#include <vector>

namespace hforge {

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
    // A known mismatch with a printed value: listed, but not a hard failure.
    bool reported = false;
};

struct CheckReport {
    std::vector<Check> checks;
    // No hard failures.
    bool pass() const;
    int passed() const;
    int hard_failures() const;
    int discrepancies() const;
    void add(std::string name, bool ok, std::string detail = {});
    // Adds a check whose failure is reported rather than fatal.
    void report(std::string name, bool ok, std::string detail = {});
    void append(const CheckReport &o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }
};

} // namespace hforge
