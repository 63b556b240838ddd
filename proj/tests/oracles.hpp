#pragma once

// Test-side reference implementations. Everything here is written
// independently of the library paths it checks: different loop order for the
// matrix product, direct log-sum-exp for cross-entropy, and a hand-rolled
// plain-CE training step for the baseline-equivalence check.

#include <cmath>
#include <cstddef>
#include <vector>

#include "scn/dataset.hpp"
#include "scn/model.hpp"
#include "scn/sgd.hpp"
#include "scn/tensor.hpp"
#include "scn/trainer.hpp"

namespace oracles {

/// Naive triple-loop product with k-outer accumulation order (the library
/// accumulates k-inner, so agreement is numerical, not structural).
inline scn::Tensor2D matmul(const scn::Tensor2D& a, const scn::Tensor2D& b) {
    scn::Tensor2D c(a.rows(), b.cols());
    for (std::size_t k = 0; k < a.cols(); ++k)
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

/// Plain softmax cross-entropy via direct log-sum-exp (no max subtraction;
/// fine for the moderate logits used in tests).
inline double plain_cross_entropy(const scn::Tensor2D& logits, const std::vector<int>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < logits.rows(); ++i) {
        double sum_exp = 0.0;
        for (std::size_t j = 0; j < logits.cols(); ++j) sum_exp += std::exp(logits(i, j));
        total += std::log(sum_exp) - logits(i, static_cast<std::size_t>(labels[i]));
    }
    return total / static_cast<double>(logits.rows());
}

/// Plain scalar sigmoid.
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Two-layer MLP forward pass with explicit loops (rectifier on the hidden
/// layer, linear output).
inline scn::Tensor2D mlp2_forward(const scn::Tensor2D& x, const scn::Tensor2D& w0,
                                  const std::vector<double>& b0, const scn::Tensor2D& w1,
                                  const std::vector<double>& b1) {
    scn::Tensor2D hidden(x.rows(), w0.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < w0.cols(); ++j) {
            double z = b0[j];
            for (std::size_t d = 0; d < x.cols(); ++d) z += x(i, d) * w0(d, j);
            hidden(i, j) = z > 0.0 ? z : 0.0;
        }
    scn::Tensor2D out(x.rows(), w1.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < w1.cols(); ++j) {
            double z = b1[j];
            for (std::size_t d = 0; d < hidden.cols(); ++d) z += hidden(i, d) * w1(d, j);
            out(i, j) = z;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Reference plain cross-entropy trainer.
//
// Replicates the batching, shuffling and SGD conventions of the library
// trainer but computes the loss path itself: unscaled logits, softmax
// cross-entropy, gradients, no importance weighting, no hinge, no
// relabeling. The SCN trainer with every module switched off must follow
// the exact same parameter trajectory, bit for bit.
// ---------------------------------------------------------------------------
inline void reference_ce_epoch(scn::ScnModel& model, const scn::LabeledDataset& ds,
                               const scn::ScnConfig& cfg, std::size_t epoch,
                               scn::SgdOptimizer& opt) {
    const std::size_t n = ds.size();
    const std::vector<std::size_t> order = scn::shuffled_indices(n, cfg.seed, epoch);

    for (std::size_t start = 0; start < n; start += cfg.batch_size) {
        const std::size_t batch_n = std::min(cfg.batch_size, n - start);
        scn::Tensor2D inputs(batch_n, ds.dim());
        std::vector<int> labels(batch_n);
        for (std::size_t b = 0; b < batch_n; ++b) {
            const std::size_t row = order[start + b];
            for (std::size_t d = 0; d < ds.dim(); ++d) inputs(b, d) = ds.features(row, d);
            labels[b] = ds.current_labels[row];
        }

        const scn::Tensor2D features = model.backbone.forward_features(inputs);
        const scn::Tensor2D logits = scn::matmul(features, model.classifier.weights);

        const std::size_t classes = logits.cols();
        scn::Tensor2D dlogits(batch_n, classes);
        const double inv_n = 1.0 / static_cast<double>(batch_n);
        for (std::size_t i = 0; i < batch_n; ++i) {
            double row_max = logits(i, 0);
            for (std::size_t j = 1; j < classes; ++j) row_max = std::max(row_max, logits(i, j));
            double denom = 0.0;
            for (std::size_t j = 0; j < classes; ++j) denom += std::exp(logits(i, j) - row_max);
            for (std::size_t j = 0; j < classes; ++j) {
                const double p = std::exp(logits(i, j) - row_max) / denom;
                const double target = (j == static_cast<std::size_t>(labels[i])) ? 1.0 : 0.0;
                dlogits(i, j) = (p - target) * inv_n;
            }
        }

        const scn::Tensor2D grad_classifier = scn::matmul_transpose_a(features, dlogits);
        const scn::Tensor2D grad_features = scn::matmul_transpose_b(dlogits, model.classifier.weights);
        const scn::BackboneGrads backbone_grads = model.backbone.backward(grad_features);

        std::vector<double> grads;
        for (std::size_t k = 0; k < backbone_grads.weights.size(); ++k) {
            grads.insert(grads.end(), backbone_grads.weights[k].data().begin(),
                         backbone_grads.weights[k].data().end());
            grads.insert(grads.end(), backbone_grads.biases[k].begin(),
                         backbone_grads.biases[k].end());
        }
        grads.insert(grads.end(), model.attention.weights.size(), 0.0);  // head untouched
        if (model.attention.use_bias) grads.push_back(0.0);
        grads.insert(grads.end(), grad_classifier.data().begin(), grad_classifier.data().end());

        std::vector<double> params = model.flatten_params(false);
        opt.step(params, grads, epoch);
        model.set_params(params, false);
    }
}

}  // namespace oracles
