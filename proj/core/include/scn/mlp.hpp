#pragma once

#include <cstddef>
#include <vector>

#include "scn/rng.hpp"
#include "scn/tensor.hpp"

namespace scn {

/// Gradients for every backbone parameter plus the gradient w.r.t. the
/// network input; shapes mirror the parameters.
struct BackboneGrads {
    std::vector<Tensor2D> weights;
    std::vector<std::vector<double>> biases;
    Tensor2D input;
};

// ---------------------------------------------------------------------------
// Small fully-connected feature extractor.
//
// Layer k maps n_k -> n_{k+1} via A_{k+1} = act(A_k * W_k + b_k) with a
// rectifier on every layer except the last, which stays linear so features
// can take any sign. Backpropagation is hand-derived for this fixed shape.
// Sample convention is row-major: inputs are N x input_dim, features N x D.
// ---------------------------------------------------------------------------
class MlpBackbone {
public:
    MlpBackbone() = default;

    /// Seeded init: weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)],
    /// biases zero. dims = {input_dim, hidden..., feature_dim}, at least 2 entries.
    static MlpBackbone random(const std::vector<std::size_t>& dims, Rng& rng);

    /// Assemble from explicit parameters; validates the dimension chain.
    static MlpBackbone from_layers(std::vector<Tensor2D> weights,
                                   std::vector<std::vector<double>> biases);

    std::size_t layer_count() const { return weights_.size(); }
    std::size_t input_dim() const { return weights_.empty() ? 0 : weights_.front().rows(); }
    std::size_t feature_dim() const { return weights_.empty() ? 0 : weights_.back().cols(); }

    const Tensor2D& weight(std::size_t k) const { return weights_[k]; }
    Tensor2D& weight(std::size_t k) { return weights_[k]; }
    const std::vector<double>& bias(std::size_t k) const { return biases_[k]; }
    std::vector<double>& bias(std::size_t k) { return biases_[k]; }

    /// Forward pass that caches activations for a subsequent backward().
    Tensor2D forward_features(const Tensor2D& inputs);

    /// Cache-free forward pass for evaluation; safe to call concurrently on
    /// a const backbone.
    Tensor2D infer_features(const Tensor2D& inputs) const;

    /// Gradients of a scalar loss given dLoss/dFeatures from the cached
    /// forward pass. Throws StateError if no forward pass is cached.
    BackboneGrads backward(const Tensor2D& upstream_grad) const;

    bool has_cached_forward() const { return !activations_.empty(); }

    // Flat parameter packing (layer 0 weight row-major, layer 0 bias, ...).
    std::size_t parameter_count() const;
    void append_params(std::vector<double>& out) const;
    std::size_t read_params(const std::vector<double>& flat, std::size_t offset);

    bool operator==(const MlpBackbone& other) const {
        return weights_ == other.weights_ && biases_ == other.biases_;
    }

private:
    std::vector<Tensor2D> weights_;             // layer k: n_k x n_{k+1}
    std::vector<std::vector<double>> biases_;   // layer k: n_{k+1}
    // forward cache
    std::vector<Tensor2D> activations_;         // A_0 (= input) .. A_L
    std::vector<Tensor2D> preacts_;             // Z_0 .. Z_{L-1}
};

}  // namespace scn
