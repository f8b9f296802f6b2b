#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hkit {

struct Diagnostic {
    std::string name;
    double value = 0.0;
};

// One verified inequality or identity: lhs against rhs at a tolerance.
// For inequality checks pass means lhs <= rhs * (1 + tolerance); identity
// style checks store the deviation in lhs and the allowed deviation in rhs.
struct VerificationReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0; // lhs / rhs when rhs > 0
    double tolerance = 0.0;
    bool pass = false;
    std::vector<Diagnostic> diagnostics;

    void add(std::string diag_name, double value) {
        diagnostics.push_back({std::move(diag_name), value});
    }

    // 0.0 when absent; diagnostics are write-once so this is unambiguous
    double diagnostic(const std::string& diag_name) const {
        for (const auto& d : diagnostics)
            if (d.name == diag_name) return d.value;
        return 0.0;
    }

    bool has_diagnostic(const std::string& diag_name) const {
        for (const auto& d : diagnostics)
            if (d.name == diag_name) return true;
        return false;
    }
};

// A quadrature-evaluated kernel norm plus its convergence evidence.
struct NormReport {
    double value = 0.0;
    double convergence = 0.0;  // relative change under one refinement
    double skipped_mass = 0.0; // |Phi|-mass fraction at skipped (near-singular) nodes
    std::int64_t nodes_used = 0;
    std::int64_t nodes_skipped = 0;
};

} // namespace hkit
