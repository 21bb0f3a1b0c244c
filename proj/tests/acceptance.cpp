#include "dopkit/accept.hpp"

#include <cstdio>
#include <exception>

int main() {
    try {
        dopkit::AcceptanceReport rep = dopkit::run_acceptance(dopkit::Suite::Full, 1);
        std::fputs(rep.to_text().c_str(), stdout);
        return rep.all_passed() ? 0 : 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
        return 2;
    }
}
