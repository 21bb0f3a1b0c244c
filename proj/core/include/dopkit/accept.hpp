#ifndef DOPKIT_ACCEPT_HPP
#define DOPKIT_ACCEPT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dopkit {

// Small: exact enumeration oracles only (N <= 6, hexagons <= 12 cells) plus
// the determinism check.  Full: every criterion.
enum class Suite { Small, Full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool ran = false;     // false when skipped by the small suite
    bool passed = false;
    std::string detail;   // the numbers behind the verdict, or the error
};

struct AcceptanceReport {
    Suite suite = Suite::Small;
    std::uint64_t seed = 1;
    std::vector<CriterionResult> results;

    bool all_passed() const;     // over the criteria that ran
    std::string to_text() const; // one line per criterion plus a verdict line
    std::string to_json() const;
};

AcceptanceReport run_acceptance(Suite suite, std::uint64_t seed);

} // namespace dopkit

#endif
