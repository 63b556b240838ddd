#include "scn/sgd.hpp"

#include <string>

#include "scn/errors.hpp"

namespace scn {

double learning_rate(const LrSchedule& schedule, std::size_t epoch) {
    double rate = schedule.base_rate;
    for (std::size_t decay : schedule.decay_epochs)
        if (decay <= epoch) rate *= schedule.decay_factor;
    return rate;
}

SgdOptimizer::SgdOptimizer(LrSchedule schedule, double momentum)
    : schedule_(std::move(schedule)), momentum_(momentum) {
    if (schedule_.base_rate <= 0.0) throw DomainError("SgdOptimizer: base rate must be positive");
    if (schedule_.decay_factor <= 0.0 || schedule_.decay_factor >= 1.0)
        throw DomainError("SgdOptimizer: decay factor must lie in (0, 1)");
    if (momentum_ < 0.0 || momentum_ >= 1.0)
        throw DomainError("SgdOptimizer: momentum must lie in [0, 1)");
}

void SgdOptimizer::step(std::vector<double>& params, const std::vector<double>& grads,
                        std::size_t epoch) {
    if (params.size() != grads.size())
        throw ShapeError("SgdOptimizer::step: " + std::to_string(params.size()) +
                         " params vs " + std::to_string(grads.size()) + " grads");
    if (velocity_.empty()) velocity_.assign(params.size(), 0.0);
    if (velocity_.size() != params.size())
        throw ShapeError("SgdOptimizer::step: parameter count changed mid-run");

    const double rate = learning_rate(schedule_, epoch);
    for (std::size_t i = 0; i < params.size(); ++i) {
        velocity_[i] = momentum_ * velocity_[i] + grads[i];
        params[i] -= rate * velocity_[i];
    }
}

}  // namespace scn
