#include "scn/finite_diff.hpp"

#include <algorithm>
#include <cmath>

#include "scn/errors.hpp"

namespace scn {

std::vector<double> finite_diff_grad(
    const std::function<double(const std::vector<double>&)>& loss_fn,
    std::vector<double> params, double step) {
    if (step <= 0.0) throw DomainError("finite_diff_grad: step must be positive");

    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + step;
        const double up = loss_fn(params);
        params[i] = saved - step;
        const double down = loss_fn(params);
        params[i] = saved;
        if (!std::isfinite(up) || !std::isfinite(down))
            throw NumericError("finite_diff_grad: loss_fn returned a non-finite value");
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

double rel_error(double analytic, double numeric, double floor) {
    const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
    return std::abs(analytic - numeric) / denom;
}

double max_rel_error(const std::vector<double>& analytic, const std::vector<double>& numeric,
                     double floor) {
    double worst = 0.0;
    const std::size_t n = std::min(analytic.size(), numeric.size());
    for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, rel_error(analytic[i], numeric[i], floor));
    if (analytic.size() != numeric.size()) return 1.0;  // mismatched lengths never agree
    return worst;
}

}  // namespace scn
