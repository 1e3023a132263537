#pragma once

#include <cstdint>
#include <string>

namespace borell {

// Outcome of one inequality verification.  `margin` is the signed slack of the
// checked inequality, oriented so that `satisfied == (margin >= -tolerance)`
// always holds; lhs/rhs are reported as named in the inequality being checked.
struct CheckReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool satisfied = false;
    std::string worst_witness;
    std::int64_t samples_checked = 0;
    double tolerance = 0.0;
};

inline CheckReport make_report(double lhs, double rhs, double margin, double tolerance,
                               std::string witness, std::int64_t samples) {
    CheckReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = margin;
    r.tolerance = tolerance;
    r.satisfied = margin >= -tolerance;
    r.worst_witness = std::move(witness);
    r.samples_checked = samples;
    return r;
}

}  // namespace borell
