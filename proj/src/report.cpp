#include "hforge/report.hpp"

namespace hforge {

bool CheckReport::pass() const { return hard_failures() == 0; }

int CheckReport::passed() const {
    int n = 0;
    for (const auto &c : checks) n += c.pass ? 1 : 0;
    return n;
}

int CheckReport::hard_failures() const {
    int n = 0;
    for (const auto &c : checks) n += (!c.pass && !c.reported) ? 1 : 0;
    return n;
}

int CheckReport::discrepancies() const {
    int n = 0;
    for (const auto &c : checks) n += (!c.pass && c.reported) ? 1 : 0;
    return n;
}

void CheckReport::add(std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail), false});
}

void CheckReport::report(std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail), true});
}

} // namespace hforge
