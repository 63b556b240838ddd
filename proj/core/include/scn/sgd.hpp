#pragma once

#include <cstddef>
#include <vector>

namespace scn {

/// Step-decay learning-rate schedule: the base rate is multiplied by
/// decay_factor once for every decay epoch <= current epoch.
struct LrSchedule {
    double base_rate = 0.1;
    std::vector<std::size_t> decay_epochs = {15, 30};
    double decay_factor = 0.1;
};

/// Effective learning rate at an epoch. Pure function of the epoch index;
/// replaying a schedule yields identical rates.
double learning_rate(const LrSchedule& schedule, std::size_t epoch);

/// SGD over a flat parameter vector, with optional classical momentum:
/// v <- momentum * v + g;  p <- p - lr(epoch) * v.
class SgdOptimizer {
public:
    SgdOptimizer(LrSchedule schedule, double momentum);

    void step(std::vector<double>& params, const std::vector<double>& grads, std::size_t epoch);

    double rate_at(std::size_t epoch) const { return learning_rate(schedule_, epoch); }
    const LrSchedule& schedule() const { return schedule_; }
    double momentum() const { return momentum_; }

    /// Drops accumulated velocity.
    void reset() { velocity_.clear(); }

private:
    LrSchedule schedule_;
    double momentum_;
    std::vector<double> velocity_;  // sized lazily on first step
};

}  // namespace scn
