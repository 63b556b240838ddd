#include "scn/loss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "scn/errors.hpp"

namespace scn {

Classifier Classifier::random(std::size_t feature_dim, int classes, Rng& rng) {
    if (feature_dim == 0) throw DomainError("Classifier::random: zero feature dim");
    if (classes < 2) throw DomainError("Classifier::random: need at least 2 classes");
    Classifier c;
    c.weights = Tensor2D(feature_dim, static_cast<std::size_t>(classes));
    const double bound = 1.0 / std::sqrt(static_cast<double>(feature_dim));
    for (double& v : c.weights.data()) v = rng.uniform(-bound, bound);
    return c;
}

Tensor2D class_logits(const Classifier& classifier, const Tensor2D& features) {
    return matmul(features, classifier.weights);
}

WceResult wce_loss(const Classifier& classifier, const Tensor2D& features,
                   const std::vector<double>& alphas, const std::vector<int>& labels) {
    const std::size_t n = features.rows();
    const int classes = classifier.class_count();
    if (n == 0) throw ShapeError("wce_loss: empty batch");
    if (alphas.size() != n || labels.size() != n)
        throw ShapeError("wce_loss: alphas/labels must match the batch size");
    if (features.cols() != classifier.feature_dim())
        throw ShapeError("wce_loss: features have " + std::to_string(features.cols()) +
                         " columns, classifier expects " +
                         std::to_string(classifier.feature_dim()));
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] < 0 || labels[i] >= classes)
            throw DomainError("wce_loss: label " + std::to_string(labels[i]) + " of sample " +
                              std::to_string(i) + " outside [0, " + std::to_string(classes) + ")");
        if (!(alphas[i] > 0.0) || !std::isfinite(alphas[i]))
            throw DomainError("wce_loss: importance weight of sample " + std::to_string(i) +
                              " must be finite and positive");
    }

    WceResult r;
    r.logits = matmul(features, classifier.weights);
    r.scaled_logits = r.logits;
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < classes; ++j)
            r.scaled_logits(i, static_cast<std::size_t>(j)) *= alphas[i];
    check_finite(r.scaled_logits, "wce_loss: scaled logits");

    // Softmax with per-row max subtraction.
    r.probabilities = Tensor2D(n, static_cast<std::size_t>(classes));
    double loss_sum = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        double row_max = r.scaled_logits(i, 0);
        for (int j = 1; j < classes; ++j)
            row_max = std::max(row_max, r.scaled_logits(i, static_cast<std::size_t>(j)));
        double denom = 0.0;
        for (int j = 0; j < classes; ++j)
            denom += std::exp(r.scaled_logits(i, static_cast<std::size_t>(j)) - row_max);
        for (int j = 0; j < classes; ++j)
            r.probabilities(i, static_cast<std::size_t>(j)) =
                std::exp(r.scaled_logits(i, static_cast<std::size_t>(j)) - row_max) / denom;
        const std::size_t y = static_cast<std::size_t>(labels[i]);
        loss_sum += std::log(denom) + row_max - r.scaled_logits(i, y);
    }
    r.loss = loss_sum * inv_n;
    if (!std::isfinite(r.loss)) throw NumericError("wce_loss: non-finite loss");

    // dL/dz'_ij = (p_ij - [j == y_i]) / N; alpha gradient sums over all C
    // scaled logits; classifier/feature gradients chain through alpha_i.
    Tensor2D dscaled(n, static_cast<std::size_t>(classes));
    Tensor2D dlogits(n, static_cast<std::size_t>(classes));
    r.grad_alphas.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t y = static_cast<std::size_t>(labels[i]);
        double dalpha = 0.0;
        for (int jj = 0; jj < classes; ++jj) {
            const std::size_t j = static_cast<std::size_t>(jj);
            const double g = (r.probabilities(i, j) - (j == y ? 1.0 : 0.0)) * inv_n;
            dscaled(i, j) = g;
            dlogits(i, j) = g * alphas[i];
            dalpha += g * r.logits(i, j);
        }
        r.grad_alphas[i] = dalpha;
    }
    r.grad_classifier = matmul_transpose_a(features, dlogits);
    r.grad_features = matmul_transpose_b(dlogits, classifier.weights);
    return r;
}

RankSplit rank_split(const std::vector<double>& alphas, double beta) {
    const std::size_t n = alphas.size();
    if (n < 2) throw DomainError("rank_split: need at least 2 samples for two groups");
    if (!(beta > 0.0) || !(beta < 1.0)) throw DomainError("rank_split: beta must lie in (0, 1)");

    RankSplit split;
    split.order.resize(n);
    std::iota(split.order.begin(), split.order.end(), std::size_t{0});
    std::stable_sort(split.order.begin(), split.order.end(),
                     [&](std::size_t a, std::size_t b) { return alphas[a] > alphas[b]; });

    const double m = std::round(beta * static_cast<double>(n));
    split.high_count = static_cast<std::size_t>(
        std::clamp(m, 1.0, static_cast<double>(n - 1)));
    split.high.assign(split.order.begin(),
                      split.order.begin() + static_cast<std::ptrdiff_t>(split.high_count));
    split.low.assign(split.order.begin() + static_cast<std::ptrdiff_t>(split.high_count),
                     split.order.end());
    return split;
}

RrResult rr_loss(const std::vector<double>& alphas, const std::vector<std::size_t>& high,
                 const std::vector<std::size_t>& low, double delta1) {
    const std::size_t n = alphas.size();
    if (high.empty() || low.empty()) throw DomainError("rr_loss: both groups must be non-empty");
    if (high.size() + low.size() != n)
        throw DomainError("rr_loss: groups must cover the batch exactly");
    std::vector<char> seen(n, 0);
    for (const auto* group : {&high, &low})
        for (std::size_t idx : *group) {
            if (idx >= n) throw DomainError("rr_loss: group index outside the batch");
            if (seen[idx]++) throw DomainError("rr_loss: groups overlap at index " +
                                               std::to_string(idx));
        }
    if (delta1 < 0.0) throw DomainError("rr_loss: delta1 must be non-negative");

    RrResult r;
    double high_sum = 0.0, low_sum = 0.0;
    for (std::size_t idx : high) high_sum += alphas[idx];
    for (std::size_t idx : low) low_sum += alphas[idx];
    r.high_mean = high_sum / static_cast<double>(high.size());
    r.low_mean = low_sum / static_cast<double>(low.size());

    const double hinge = delta1 - (r.high_mean - r.low_mean);
    r.active = hinge > 0.0;
    r.loss = r.active ? hinge : 0.0;
    r.grad_alphas.assign(n, 0.0);
    if (r.active) {
        const double dhigh = -1.0 / static_cast<double>(high.size());
        const double dlow = 1.0 / static_cast<double>(low.size());
        for (std::size_t idx : high) r.grad_alphas[idx] = dhigh;
        for (std::size_t idx : low) r.grad_alphas[idx] = dlow;
        r.grad_delta1 = 1.0;
    }
    return r;
}

double total_loss(double wce, double rr, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw DomainError("total_loss: gamma must lie in [0, 1]");
    return gamma * rr + (1.0 - gamma) * wce;
}

}  // namespace scn
