#pragma once

#include <string>
#include <vector>

namespace abelrad {

struct SelftestCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SelftestOptions {
    bool inject_adjoint_fault = false;  // test fixture: flips a sign in the adjoint check
};

struct SelftestReport {
    std::vector<SelftestCheck> checks;
    bool all_pass() const;
    std::string to_table() const;
};

/// Quick end-to-end invariant suite: adjoint identity, null-space law,
/// diagonal identities, coefficient oracle, forward/solve round trips,
/// solver contracts.
SelftestReport run_selftest(const SelftestOptions& opts = {});

}  // namespace abelrad
