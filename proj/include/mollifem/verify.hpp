#ifndef MOLLIFEM_VERIFY_HPP
#define MOLLIFEM_VERIFY_HPP

#include <string>
#include <vector>

namespace mollifem {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the invariant suites of the mesh/basis, kernel, quadrature and
/// experiment layers. Each entry is one named pass/fail check.
std::vector<CheckResult> run_verification();

} // namespace mollifem

#endif
