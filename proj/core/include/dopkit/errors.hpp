#ifndef DOPKIT_ERRORS_HPP
#define DOPKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dopkit {

// Invalid or inconsistent user-supplied configuration.  CLI exit code 1.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation failed to converge or produced out-of-contract values.
// CLI exit code 2.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure attributable to insufficient working precision; carries the
// index at which the failure was detected so callers can raise precision.
struct precision_error : numeric_error {
    int failing_index;
    precision_error(const std::string& what, int index)
        : numeric_error(what), failing_index(index) {}
};

} // namespace dopkit

#endif
