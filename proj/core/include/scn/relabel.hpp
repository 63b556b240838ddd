#pragma once

#include <cstddef>
#include <vector>

#include "scn/tensor.hpp"

namespace scn {

/// One label correction within a batch.
struct RelabelEvent {
    std::size_t index = 0;  // batch-local sample index
    int old_label = 0;
    int new_label = 0;
    double p_max = 0.0;     // maximum predicted probability
    double p_given = 0.0;   // probability at the previously assigned label
};

struct RelabelResult {
    std::vector<int> labels;           // updated copy of the input labels
    std::vector<RelabelEvent> events;  // in ascending low-group order
};

/// Relabeling rule over the low-importance group only: a sample's label is
/// replaced by the argmax class when p_max - p_given > delta2, otherwise
/// kept. Argmax ties resolve to the lowest class index. High-group samples
/// are never touched; applying the rule twice equals applying it once.
RelabelResult relabel(const Tensor2D& probabilities, const std::vector<int>& labels,
                      const std::vector<std::size_t>& low_indices, double delta2);

}  // namespace scn
