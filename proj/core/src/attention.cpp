#include "scn/attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scn/errors.hpp"

namespace scn {

namespace {
constexpr double kAlphaMin = 1e-12;
constexpr double kAlphaMax = 1.0 - 1e-12;
}  // namespace

AttentionHead AttentionHead::random(std::size_t feature_dim, Rng& rng, bool use_bias) {
    if (feature_dim == 0) throw DomainError("AttentionHead::random: zero feature dim");
    AttentionHead head;
    head.weights.resize(feature_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(feature_dim));
    for (double& v : head.weights) v = rng.uniform(-bound, bound);
    head.bias = 0.0;
    head.use_bias = use_bias;
    return head;
}

double sigmoid(double x) {
    double s;
    if (x >= 0.0) {
        s = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        s = e / (1.0 + e);
    }
    return std::clamp(s, kAlphaMin, kAlphaMax);
}

std::vector<double> attention_weights(const AttentionHead& head, const Tensor2D& features) {
    if (features.rows() == 0) throw ShapeError("attention_weights: empty batch");
    if (features.cols() != head.feature_dim())
        throw ShapeError("attention_weights: features have " + std::to_string(features.cols()) +
                         " columns, head expects " + std::to_string(head.feature_dim()));

    std::vector<double> alphas(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        double logit = head.use_bias ? head.bias : 0.0;
        for (std::size_t d = 0; d < features.cols(); ++d)
            logit += head.weights[d] * features(i, d);
        if (!std::isfinite(logit)) throw NumericError("attention_weights: non-finite logit");
        alphas[i] = sigmoid(logit);
    }
    return alphas;
}

AttentionGrads attention_backward(const AttentionHead& head, const Tensor2D& features,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& grad_alphas,
                                  Tensor2D& grad_features) {
    if (alphas.size() != features.rows() || grad_alphas.size() != features.rows())
        throw ShapeError("attention_backward: alpha vectors must match the batch size");
    if (!grad_features.empty() &&
        (grad_features.rows() != features.rows() || grad_features.cols() != features.cols()))
        throw ShapeError("attention_backward: grad_features shape mismatch");
    if (grad_features.empty()) grad_features = Tensor2D(features.rows(), features.cols());

    AttentionGrads grads;
    grads.weights.assign(head.feature_dim(), 0.0);
    for (std::size_t i = 0; i < features.rows(); ++i) {
        const double dlogit = grad_alphas[i] * alphas[i] * (1.0 - alphas[i]);
        for (std::size_t d = 0; d < features.cols(); ++d) {
            grads.weights[d] += dlogit * features(i, d);
            grad_features(i, d) += dlogit * head.weights[d];
        }
        if (head.use_bias) grads.bias += dlogit;
    }
    return grads;
}

}  // namespace scn
