#pragma once

#include <cstddef>
#include <vector>

#include "scn/rng.hpp"
#include "scn/tensor.hpp"

namespace scn {

/// Linear classifier: column j of `weights` (D x C) scores class j.
struct Classifier {
    Tensor2D weights;

    static Classifier random(std::size_t feature_dim, int classes, Rng& rng);

    std::size_t feature_dim() const { return weights.rows(); }
    int class_count() const { return static_cast<int>(weights.cols()); }
};

/// Unscaled logits z = features * weights (N x C). This is also the
/// inference path: importance weights never enter evaluation.
Tensor2D class_logits(const Classifier& classifier, const Tensor2D& features);

// ---------------------------------------------------------------------------
// Logit-weighted cross-entropy.
//
// Each sample's logits are scaled by its importance weight before the
// softmax: z'_ij = alpha_i * z_ij, L = -(1/N) sum_i log softmax(z'_i)[y_i].
// Because alpha_i multiplies all C logits, its gradient collects every class:
//   dL/dalpha_i = sum_j (p_ij - [j == y_i]) / N * z_ij   (z unscaled).
// With alpha == 1 the loss reduces exactly to standard cross-entropy.
// ---------------------------------------------------------------------------
struct WceResult {
    double loss = 0.0;
    Tensor2D logits;             // unscaled, N x C
    Tensor2D scaled_logits;      // alpha-scaled, N x C
    Tensor2D probabilities;      // softmax rows of scaled logits
    Tensor2D grad_classifier;    // D x C
    Tensor2D grad_features;      // N x D
    std::vector<double> grad_alphas;
};

WceResult wce_loss(const Classifier& classifier, const Tensor2D& features,
                   const std::vector<double>& alphas, const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// Rank regularization.
// ---------------------------------------------------------------------------

/// Descending stable sort of the importance weights and the split into
/// high/low groups. M = round(beta * N) clamped to [1, N-1]; ties keep
/// original order.
struct RankSplit {
    std::vector<std::size_t> order;  // permutation, alphas[order[k]] descending
    std::size_t high_count = 0;      // M
    std::vector<std::size_t> high;   // first M of order
    std::vector<std::size_t> low;    // remaining N - M
};

RankSplit rank_split(const std::vector<double>& alphas, double beta);

/// Hinge between group means: max(0, delta1 - (mean_high - mean_low)).
/// Group assignment is frozen during differentiation (sorting is piecewise
/// constant in alpha); at an exactly-zero hinge the subgradient is zero.
struct RrResult {
    double loss = 0.0;
    double high_mean = 0.0;
    double low_mean = 0.0;
    bool active = false;             // hinge strictly positive
    std::vector<double> grad_alphas;
    double grad_delta1 = 0.0;        // 1 when active, else 0
};

RrResult rr_loss(const std::vector<double>& alphas, const std::vector<std::size_t>& high,
                 const std::vector<std::size_t>& low, double delta1);

/// Convex combination gamma * rr + (1 - gamma) * wce; gamma outside [0, 1]
/// is a DomainError.
double total_loss(double wce, double rr, double gamma);

/// Everything one mini-batch produces on the forward path.
struct BatchState {
    std::vector<double> alphas;
    RankSplit split;
    Tensor2D logits;         // unscaled
    Tensor2D scaled_logits;
    Tensor2D probabilities;
    std::vector<int> labels;
};

}  // namespace scn
