#pragma once

#include <string>
#include <vector>

namespace gyroless {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Built-in invariant suite on fixed configurations: rotation-group and
/// conservation checks, certificate consistency, frozen spectrum, the
/// exponential bound, sensor conventions and observer convergence.
[[nodiscard]] std::vector<CheckResult> run_invariant_suite();

}  // namespace gyroless
