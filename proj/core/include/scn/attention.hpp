#pragma once

#include <cstddef>
#include <vector>

#include "scn/rng.hpp"
#include "scn/tensor.hpp"

namespace scn {

/// Per-sample importance head: a single linear unit over the feature vector
/// followed by a sigmoid. The optional bias term is off by default.
struct AttentionHead {
    std::vector<double> weights;  // length D
    double bias = 0.0;
    bool use_bias = false;

    static AttentionHead random(std::size_t feature_dim, Rng& rng, bool use_bias = false);

    std::size_t feature_dim() const { return weights.size(); }
};

/// Numerically stable sigmoid, clamped to [1e-12, 1 - 1e-12]: in doubles the
/// exact sigmoid rounds to 1.0 for logits above ~36.7, which would leak
/// weights outside the open interval (0, 1).
double sigmoid(double x);

/// alpha_i = sigmoid(w . x_i [+ bias]) for every row of features (N x D).
/// Always strictly inside (0, 1) and strictly monotone in the logit within
/// the unclamped range.
std::vector<double> attention_weights(const AttentionHead& head, const Tensor2D& features);

/// Maps dLoss/dAlpha back to the head and the features:
///   dAlpha_i/dLogit_i = alpha_i (1 - alpha_i),
///   dLogit_i/dWeights = x_i,  dLogit_i/dX_i = weights.
/// Adds the feature contribution into grad_features (N x D, pre-sized).
struct AttentionGrads {
    std::vector<double> weights;
    double bias = 0.0;
};
AttentionGrads attention_backward(const AttentionHead& head, const Tensor2D& features,
                                  const std::vector<double>& alphas,
                                  const std::vector<double>& grad_alphas,
                                  Tensor2D& grad_features);

}  // namespace scn
