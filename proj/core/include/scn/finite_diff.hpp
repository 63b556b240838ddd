#pragma once

#include <functional>
#include <vector>

namespace scn {

/// Central-difference gradient oracle: per coordinate,
/// (loss(p + h) - loss(p - h)) / 2h. loss_fn must be deterministic.
/// Throws DomainError for step <= 0 and NumericError if loss_fn returns a
/// non-finite value.
std::vector<double> finite_diff_grad(const std::function<double(const std::vector<double>&)>& loss_fn,
                                     std::vector<double> params, double step);

/// |a - f| / max(|a|, |f|, floor). The floor keeps finite-difference roundoff
/// from dominating when a gradient coordinate is legitimately near zero.
double rel_error(double analytic, double numeric, double floor = 1e-4);

/// Elementwise maximum of rel_error over two gradient vectors.
double max_rel_error(const std::vector<double>& analytic, const std::vector<double>& numeric,
                     double floor = 1e-4);

}  // namespace scn
