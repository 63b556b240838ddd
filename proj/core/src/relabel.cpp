#include "scn/relabel.hpp"

#include <cmath>
#include <string>

#include "scn/errors.hpp"

namespace scn {

RelabelResult relabel(const Tensor2D& probabilities, const std::vector<int>& labels,
                      const std::vector<std::size_t>& low_indices, double delta2) {
    const std::size_t n = probabilities.rows();
    const std::size_t classes = probabilities.cols();
    if (labels.size() != n) throw ShapeError("relabel: labels must match the batch size");
    if (delta2 < 0.0) throw DomainError("relabel: delta2 must be non-negative");
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < classes; ++j) row_sum += probabilities(i, j);
        if (std::abs(row_sum - 1.0) > 1e-6)
            throw DomainError("relabel: probability row " + std::to_string(i) +
                              " sums to " + std::to_string(row_sum));
    }

    RelabelResult result;
    result.labels = labels;
    for (std::size_t idx : low_indices) {
        if (idx >= n)
            throw DomainError("relabel: low-group index " + std::to_string(idx) +
                              " outside batch of " + std::to_string(n));
        const int given = result.labels[idx];
        if (given < 0 || static_cast<std::size_t>(given) >= classes)
            throw DomainError("relabel: label " + std::to_string(given) + " of sample " +
                              std::to_string(idx) + " outside [0, " + std::to_string(classes) +
                              ")");
        std::size_t argmax = 0;
        double p_max = probabilities(idx, 0);
        for (std::size_t j = 1; j < classes; ++j)
            if (probabilities(idx, j) > p_max) {  // strict: ties keep the lowest index
                p_max = probabilities(idx, j);
                argmax = j;
            }
        const double p_given = probabilities(idx, static_cast<std::size_t>(given));
        if (p_max - p_given > delta2) {
            RelabelEvent ev;
            ev.index = idx;
            ev.old_label = given;
            ev.new_label = static_cast<int>(argmax);
            ev.p_max = p_max;
            ev.p_given = p_given;
            result.labels[idx] = ev.new_label;
            result.events.push_back(ev);
        }
    }
    return result;
}

}  // namespace scn
