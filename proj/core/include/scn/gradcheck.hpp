#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace scn {

/// Result of the finite-difference verification of one gradient path.
struct GradCheckEntry {
    std::string component;
    double max_rel_error = 0.0;
    std::size_t instances = 0;
    bool passed = false;
};

struct GradCheckReport {
    std::vector<GradCheckEntry> entries;
    double tolerance = 0.0;
    double step = 0.0;
    bool passed = false;
};

/// Verifies every analytic gradient in the system against central finite
/// differences over random instances (batch 2-16, feature dim 2-8, classes
/// 2-8; rank groups frozen during differentiation):
///
///   wce-loss/classifier, wce-loss/features, wce-loss/alpha,
///   rr-loss/alpha, total-loss/alpha, attention/weights,
///   model/all-parameters (end-to-end through the backbone, learnable margin
///   included).
///
/// `inject_fault` names a component whose analytic gradient is deliberately
/// corrupted before comparison — a negative control proving the check can
/// fail. Unknown names raise DomainError.
GradCheckReport run_gradcheck(std::uint64_t seed, std::size_t instances, double tolerance = 1e-4,
                              double step = 1e-6, const std::string& inject_fault = "");

}  // namespace scn
