#include "scn/mlp.hpp"

#include <cmath>
#include <string>

#include "scn/errors.hpp"

namespace scn {

MlpBackbone MlpBackbone::random(const std::vector<std::size_t>& dims, Rng& rng) {
    if (dims.size() < 2) throw DomainError("MlpBackbone::random: need at least {in, out} dims");
    for (std::size_t d : dims)
        if (d == 0) throw DomainError("MlpBackbone::random: zero layer width");

    MlpBackbone net;
    for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
        const std::size_t fan_in = dims[k];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Tensor2D w(dims[k], dims[k + 1]);
        for (double& v : w.data()) v = rng.uniform(-bound, bound);
        net.weights_.push_back(std::move(w));
        net.biases_.emplace_back(dims[k + 1], 0.0);
    }
    return net;
}

MlpBackbone MlpBackbone::from_layers(std::vector<Tensor2D> weights,
                                     std::vector<std::vector<double>> biases) {
    if (weights.empty() || weights.size() != biases.size())
        throw ShapeError("from_layers: need equal, nonzero weight and bias counts");
    for (std::size_t k = 0; k < weights.size(); ++k) {
        if (biases[k].size() != weights[k].cols())
            throw ShapeError("from_layers: layer " + std::to_string(k) + " bias length " +
                             std::to_string(biases[k].size()) + " != weight cols " +
                             std::to_string(weights[k].cols()));
        if (k > 0 && weights[k - 1].cols() != weights[k].rows())
            throw ShapeError("from_layers: layer " + std::to_string(k - 1) + " output " +
                             std::to_string(weights[k - 1].cols()) + " != layer " +
                             std::to_string(k) + " input " + std::to_string(weights[k].rows()));
    }
    MlpBackbone net;
    net.weights_ = std::move(weights);
    net.biases_ = std::move(biases);
    return net;
}

namespace {

// Z = A * W + b (bias broadcast over rows).
Tensor2D affine(const Tensor2D& a, const Tensor2D& w, const std::vector<double>& b) {
    Tensor2D z = matmul(a, w);
    for (std::size_t i = 0; i < z.rows(); ++i)
        for (std::size_t j = 0; j < z.cols(); ++j) z(i, j) += b[j];
    return z;
}

Tensor2D rectify(const Tensor2D& z) {
    Tensor2D a = z;
    for (double& v : a.data())
        if (v < 0.0) v = 0.0;
    return a;
}

}  // namespace

Tensor2D MlpBackbone::forward_features(const Tensor2D& inputs) {
    if (weights_.empty()) throw StateError("forward_features: uninitialized backbone");
    if (inputs.cols() != input_dim())
        throw ShapeError("forward_features: input has " + std::to_string(inputs.cols()) +
                         " columns, backbone expects " + std::to_string(input_dim()));

    activations_.clear();
    preacts_.clear();
    activations_.push_back(inputs);
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        Tensor2D z = affine(activations_.back(), weights_[k], biases_[k]);
        preacts_.push_back(z);
        activations_.push_back(k + 1 < weights_.size() ? rectify(z) : std::move(z));
    }
    check_finite(activations_.back(), "forward_features");
    return activations_.back();
}

Tensor2D MlpBackbone::infer_features(const Tensor2D& inputs) const {
    if (weights_.empty()) throw StateError("infer_features: uninitialized backbone");
    if (inputs.cols() != input_dim())
        throw ShapeError("infer_features: input has " + std::to_string(inputs.cols()) +
                         " columns, backbone expects " + std::to_string(input_dim()));
    Tensor2D a = inputs;
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        Tensor2D z = affine(a, weights_[k], biases_[k]);
        a = k + 1 < weights_.size() ? rectify(z) : std::move(z);
    }
    check_finite(a, "infer_features");
    return a;
}

BackboneGrads MlpBackbone::backward(const Tensor2D& upstream_grad) const {
    if (activations_.empty()) throw StateError("backward: no cached forward pass");
    if (upstream_grad.rows() != activations_.back().rows() ||
        upstream_grad.cols() != activations_.back().cols())
        throw ShapeError("backward: upstream gradient shape does not match features");

    BackboneGrads grads;
    grads.weights.resize(weights_.size());
    grads.biases.resize(weights_.size());

    // Last layer is linear, so dL/dZ_last = upstream.
    Tensor2D delta = upstream_grad;
    for (std::size_t k = weights_.size(); k-- > 0;) {
        grads.weights[k] = matmul_transpose_a(activations_[k], delta);
        std::vector<double> db(weights_[k].cols(), 0.0);
        for (std::size_t i = 0; i < delta.rows(); ++i)
            for (std::size_t j = 0; j < delta.cols(); ++j) db[j] += delta(i, j);
        grads.biases[k] = std::move(db);

        Tensor2D prev = matmul_transpose_b(delta, weights_[k]);
        if (k > 0) {
            // Rectifier mask of the layer below; subgradient 0 at exactly 0.
            const Tensor2D& z = preacts_[k - 1];
            for (std::size_t i = 0; i < prev.rows(); ++i)
                for (std::size_t j = 0; j < prev.cols(); ++j)
                    if (z(i, j) <= 0.0) prev(i, j) = 0.0;
        }
        delta = std::move(prev);
    }
    grads.input = std::move(delta);
    return grads;
}

std::size_t MlpBackbone::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < weights_.size(); ++k) n += weights_[k].size() + biases_[k].size();
    return n;
}

void MlpBackbone::append_params(std::vector<double>& out) const {
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        out.insert(out.end(), weights_[k].data().begin(), weights_[k].data().end());
        out.insert(out.end(), biases_[k].begin(), biases_[k].end());
    }
}

std::size_t MlpBackbone::read_params(const std::vector<double>& flat, std::size_t offset) {
    if (flat.size() < offset + parameter_count())
        throw ShapeError("read_params: flat vector too short for backbone");
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        for (double& v : weights_[k].data()) v = flat[offset++];
        for (double& v : biases_[k]) v = flat[offset++];
    }
    return offset;
}

}  // namespace scn
