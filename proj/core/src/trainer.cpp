#include "scn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "scn/attention.hpp"
#include "scn/errors.hpp"
#include "scn/loss.hpp"
#include "scn/relabel.hpp"
#include "scn/rng.hpp"

namespace scn {

void ScnConfig::validate() const {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("ScnConfig: beta must lie in (0, 1)");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError("ScnConfig: gamma must lie in [0, 1]");
    if (delta1 < 0.0) throw DomainError("ScnConfig: delta1 must be non-negative");
    if (delta2 < 0.0) throw DomainError("ScnConfig: delta2 must be non-negative");
    if (relabel_start_epoch > epochs)
        throw DomainError("ScnConfig: relabel_start_epoch must not exceed epochs");
    if (batch_size == 0) throw DomainError("ScnConfig: batch_size must be positive");
    if (feature_dim == 0) throw DomainError("ScnConfig: feature_dim must be positive");
    if (momentum < 0.0 || momentum >= 1.0) throw DomainError("ScnConfig: momentum must lie in [0, 1)");
    if (lr.base_rate <= 0.0) throw DomainError("ScnConfig: base learning rate must be positive");
    if (lr.decay_factor <= 0.0 || lr.decay_factor >= 1.0)
        throw DomainError("ScnConfig: lr decay factor must lie in (0, 1)");
}

std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed,
                                          std::size_t epoch) {
    std::vector<std::size_t> indices(count);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    Rng rng(derive_seed(derive_seed(seed, seed_stream::kShuffle), epoch));
    rng.shuffle(indices);
    return indices;
}

ScnModel make_model(const ScnConfig& config, std::size_t input_dim, int classes) {
    config.validate();
    Rng rng(derive_seed(config.seed, seed_stream::kModelInit));
    return ScnModel::random(input_dim, config.hidden, config.feature_dim, classes, config.delta1,
                            rng);
}

SgdOptimizer make_optimizer(const ScnConfig& config) {
    return SgdOptimizer(config.lr, config.momentum);
}

namespace {

// Flat gradient vector matching ScnModel::flatten_params order.
std::vector<double> flatten_grads(const ScnModel& model, const BackboneGrads& backbone,
                                  const AttentionGrads& attention, const Tensor2D& classifier,
                                  double delta1_grad, bool include_delta1) {
    std::vector<double> flat;
    flat.reserve(model.parameter_count(include_delta1));
    for (std::size_t k = 0; k < backbone.weights.size(); ++k) {
        flat.insert(flat.end(), backbone.weights[k].data().begin(),
                    backbone.weights[k].data().end());
        flat.insert(flat.end(), backbone.biases[k].begin(), backbone.biases[k].end());
    }
    flat.insert(flat.end(), attention.weights.begin(), attention.weights.end());
    if (model.attention.use_bias) flat.push_back(attention.bias);
    flat.insert(flat.end(), classifier.data().begin(), classifier.data().end());
    if (include_delta1) flat.push_back(delta1_grad);
    return flat;
}

std::size_t argmax_row(const Tensor2D& t, std::size_t row) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < t.cols(); ++j)
        if (t(row, j) > t(row, best)) best = j;  // first maximum wins ties
    return best;
}

}  // namespace

BatchGradients batch_gradients(ScnModel& model, const Tensor2D& inputs,
                               const std::vector<int>& labels, const ScnConfig& config,
                               const RankSplit* frozen_split) {
    const std::size_t batch_n = inputs.rows();
    if (batch_n == 0) throw ShapeError("batch_gradients: empty batch");

    // Forward: backbone -> importance weights -> weighted cross-entropy.
    const Tensor2D features = model.backbone.forward_features(inputs);
    std::vector<double> alphas = config.modules.weighting
                                     ? attention_weights(model.attention, features)
                                     : std::vector<double>(batch_n, 1.0);
    WceResult wce = wce_loss(model.classifier, features, alphas, labels);

    // Rank split: needed for the hinge term and for relabeling. Batches of a
    // single sample cannot form two groups and skip both.
    const bool splittable = batch_n >= 2;
    RankSplit split;
    if (frozen_split)
        split = *frozen_split;
    else if (splittable)
        split = rank_split(alphas, config.beta);

    RrResult rr;
    rr.grad_alphas.assign(batch_n, 0.0);
    double gamma_eff = 0.0;  // hinge term absent => total is exactly the WCE
    if (config.modules.rank_reg && splittable) {
        rr = rr_loss(alphas, split.high, split.low, model.delta1);
        gamma_eff = config.gamma;
    }

    BatchGradients out;
    out.wce = wce.loss;
    out.rr = rr.loss;
    out.total = total_loss(wce.loss, rr.loss, gamma_eff);

    // Backward. Group assignment is frozen; alpha gradients combine both
    // loss terms before flowing through the sigmoid into head + features.
    const double wce_scale = 1.0 - gamma_eff;
    Tensor2D grad_features = wce.grad_features;
    for (double& v : grad_features.data()) v *= wce_scale;
    Tensor2D grad_classifier = wce.grad_classifier;
    for (double& v : grad_classifier.data()) v *= wce_scale;

    AttentionGrads attention_grads;
    attention_grads.weights.assign(model.attention.weights.size(), 0.0);
    if (config.modules.weighting) {
        std::vector<double> grad_alphas(batch_n);
        for (std::size_t b = 0; b < batch_n; ++b)
            grad_alphas[b] = wce_scale * wce.grad_alphas[b] + gamma_eff * rr.grad_alphas[b];
        attention_grads =
            attention_backward(model.attention, features, alphas, grad_alphas, grad_features);
    }

    const BackboneGrads backbone_grads = model.backbone.backward(grad_features);
    const double delta1_grad = gamma_eff * rr.grad_delta1;
    out.grads = flatten_grads(model, backbone_grads, attention_grads, grad_classifier,
                              delta1_grad, config.delta1_learnable);

    out.state.alphas = std::move(alphas);
    out.state.split = std::move(split);
    out.state.logits = std::move(wce.logits);
    out.state.scaled_logits = std::move(wce.scaled_logits);
    out.state.probabilities = std::move(wce.probabilities);
    out.state.labels = labels;
    return out;
}

EpochMetrics train_epoch(ScnModel& model, LabeledDataset& dataset, const ScnConfig& config,
                         std::size_t epoch, SgdOptimizer& optimizer,
                         std::vector<RelabelRecord>* event_log, const LabeledDataset* test) {
    config.validate();
    dataset.validate();
    const std::size_t n = dataset.size();
    if (n == 0) throw DomainError("train_epoch: empty dataset");

    const bool include_delta1 = config.delta1_learnable;
    const std::vector<std::size_t> order = shuffled_indices(n, config.seed, epoch);

    double wce_sum = 0.0, rr_sum = 0.0, total_sum = 0.0;
    std::size_t correct = 0;
    double alpha_clean_sum = 0.0, alpha_corrupt_sum = 0.0;
    std::size_t clean_count = 0, corrupt_count = 0;
    std::vector<RelabelRecord> epoch_events;

    for (std::size_t start = 0; start < n; start += config.batch_size) {
        const std::size_t batch_n = std::min(config.batch_size, n - start);

        // Gather the batch.
        Tensor2D inputs(batch_n, dataset.dim());
        std::vector<int> labels(batch_n);
        std::vector<std::size_t> rows(batch_n);
        for (std::size_t b = 0; b < batch_n; ++b) {
            const std::size_t row = order[start + b];
            rows[b] = row;
            for (std::size_t d = 0; d < dataset.dim(); ++d)
                inputs(b, d) = dataset.features(row, d);
            labels[b] = dataset.current_labels[row];
        }

        BatchGradients batch = batch_gradients(model, inputs, labels, config);

        std::vector<double> params = model.flatten_params(include_delta1);
        optimizer.step(params, batch.grads, epoch);
        model.set_params(params, include_delta1);
        if (include_delta1 && model.delta1 < 0.0) model.delta1 = 0.0;

        // Bookkeeping on the pre-update forward pass.
        const BatchState& state = batch.state;
        const bool want_relabel = config.modules.relabel &&
                                  epoch >= config.relabel_start_epoch && batch_n >= 2;

        for (std::size_t b = 0; b < batch_n; ++b) {
            if (static_cast<int>(argmax_row(state.logits, b)) == state.labels[b]) ++correct;
            if (dataset.corrupted_mask[rows[b]]) {
                alpha_corrupt_sum += state.alphas[b];
                ++corrupt_count;
            } else {
                alpha_clean_sum += state.alphas[b];
                ++clean_count;
            }
        }

        if (want_relabel) {
            const RelabelResult changed =
                relabel(state.probabilities, state.labels, state.split.low, config.delta2);
            for (const RelabelEvent& ev : changed.events) {
                const std::size_t row = rows[ev.index];
                dataset.current_labels[row] = ev.new_label;
                RelabelRecord record;
                record.epoch = epoch;
                record.sample_id = dataset.sample_ids[row];
                record.old_label = ev.old_label;
                record.new_label = ev.new_label;
                record.p_max = ev.p_max;
                record.p_given = ev.p_given;
                epoch_events.push_back(record);
            }
        }

        const double weight = static_cast<double>(batch_n);
        wce_sum += batch.wce * weight;
        rr_sum += batch.rr * weight;
        total_sum += batch.total * weight;
    }

    EpochMetrics metrics;
    metrics.epoch = epoch;
    const double inv_n = 1.0 / static_cast<double>(n);
    metrics.wce_loss = wce_sum * inv_n;
    metrics.rr_loss = rr_sum * inv_n;
    metrics.total_loss = total_sum * inv_n;
    metrics.train_accuracy = static_cast<double>(correct) * inv_n;
    if (clean_count) metrics.alpha_mean_clean = alpha_clean_sum / static_cast<double>(clean_count);
    if (corrupt_count)
        metrics.alpha_mean_corrupted = alpha_corrupt_sum / static_cast<double>(corrupt_count);
    metrics.relabel_events = epoch_events.size();
    const RelabelQuality quality = relabel_quality(dataset, epoch_events);
    metrics.relabel_precision = quality.precision;
    metrics.relabel_recall = quality.recall;
    metrics.learning_rate = optimizer.rate_at(epoch);
    metrics.delta1 = model.delta1;

    if (test) {
        const Evaluation eval = evaluate(model, *test);
        metrics.test_accuracy = eval.accuracy;
        metrics.test_mean_class_accuracy = eval.mean_class_accuracy;
    }

    if (event_log)
        event_log->insert(event_log->end(), epoch_events.begin(), epoch_events.end());
    return metrics;
}

TrainResult train(ScnModel& model, LabeledDataset& dataset, const ScnConfig& config,
                  const LabeledDataset* test) {
    config.validate();
    TrainResult result;
    SgdOptimizer optimizer = make_optimizer(config);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch)
        result.trace.push_back(
            train_epoch(model, dataset, config, epoch, optimizer, &result.relabel_events, test));
    return result;
}

Evaluation evaluate(const ScnModel& model, const LabeledDataset& dataset) {
    dataset.validate();
    if (dataset.size() == 0) throw DomainError("evaluate: empty dataset");

    const Tensor2D features = model.backbone.infer_features(dataset.features);
    const Tensor2D logits = class_logits(model.classifier, features);

    const std::size_t classes = static_cast<std::size_t>(dataset.class_count);
    Evaluation eval;
    eval.confusion.assign(classes, std::vector<std::size_t>(classes, 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const std::size_t predicted = argmax_row(logits, i);
        const std::size_t truth = static_cast<std::size_t>(dataset.current_labels[i]);
        eval.confusion[truth][predicted] += 1;
        if (predicted == truth) ++correct;
    }
    eval.accuracy = static_cast<double>(correct) / static_cast<double>(dataset.size());

    double acc_sum = 0.0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        const std::size_t row_total =
            std::accumulate(eval.confusion[c].begin(), eval.confusion[c].end(), std::size_t{0});
        if (row_total == 0) continue;
        acc_sum += static_cast<double>(eval.confusion[c][c]) / static_cast<double>(row_total);
        ++present;
    }
    eval.mean_class_accuracy = present ? acc_sum / static_cast<double>(present) : 0.0;
    return eval;
}

AblationAxis ablation_axis_from_string(const std::string& name) {
    if (name == "gamma") return AblationAxis::gamma;
    if (name == "delta1") return AblationAxis::delta1;
    if (name == "delta2") return AblationAxis::delta2;
    if (name == "beta") return AblationAxis::beta;
    if (name == "modules") return AblationAxis::modules;
    throw DomainError("unknown ablation axis '" + name +
                      "' (expected gamma|delta1|delta2|beta|modules)");
}

std::string to_string(AblationAxis axis) {
    switch (axis) {
        case AblationAxis::gamma: return "gamma";
        case AblationAxis::delta1: return "delta1";
        case AblationAxis::delta2: return "delta2";
        case AblationAxis::beta: return "beta";
        case AblationAxis::modules: return "modules";
    }
    return "?";
}

namespace {

std::string trimmed_number(double v) {
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

AblationRow run_one(const LabeledDataset& train_set, const LabeledDataset& test_set,
                    ScnConfig config, std::string label) {
    LabeledDataset working = train_set;  // relabeling mutates labels
    ScnModel model = make_model(config, working.dim(), working.class_count);
    train(model, working, config, nullptr);
    const Evaluation test_eval = evaluate(model, test_set);
    const Evaluation train_eval = evaluate(model, working);
    AblationRow row;
    row.label = std::move(label);
    row.test_accuracy = test_eval.accuracy;
    row.test_mean_class_accuracy = test_eval.mean_class_accuracy;
    row.final_train_accuracy = train_eval.accuracy;
    row.config = std::move(config);
    return row;
}

}  // namespace

std::vector<AblationRow> ablation_grid(const LabeledDataset& train_set,
                                       const LabeledDataset& test_set, const ScnConfig& base,
                                       AblationAxis axis, const std::vector<double>& values) {
    base.validate();
    train_set.validate();
    test_set.validate();

    // Reject any out-of-domain value before the first training run.
    if (axis != AblationAxis::modules) {
        if (values.empty()) throw DomainError("ablation_grid: no values given");
        for (double v : values) {
            ScnConfig probe = base;
            switch (axis) {
                case AblationAxis::gamma: probe.gamma = v; break;
                case AblationAxis::delta1: probe.delta1 = v; break;
                case AblationAxis::delta2: probe.delta2 = v; break;
                case AblationAxis::beta: probe.beta = v; break;
                case AblationAxis::modules: break;
            }
            probe.validate();
        }
    }

    std::vector<AblationRow> rows;
    if (axis == AblationAxis::modules) {
        // The on/off grid from plain training to full SCN.
        const std::vector<std::pair<std::string, ModuleSwitches>> grid = {
            {"baseline", {false, false, false}},
            {"relabel-only", {false, false, true}},
            {"rankreg-only", {false, true, false}},
            {"weighting-only", {true, false, false}},
            {"weighting+rankreg", {true, true, false}},
            {"full-scn", {true, true, true}},
        };
        for (const auto& [label, switches] : grid) {
            ScnConfig config = base;
            config.modules = switches;
            rows.push_back(run_one(train_set, test_set, std::move(config), label));
        }
        return rows;
    }

    for (double v : values) {
        ScnConfig config = base;
        switch (axis) {
            case AblationAxis::gamma: config.gamma = v; break;
            case AblationAxis::delta1: config.delta1 = v; config.delta1_learnable = false; break;
            case AblationAxis::delta2: config.delta2 = v; break;
            case AblationAxis::beta: config.beta = v; break;
            case AblationAxis::modules: break;
        }
        rows.push_back(run_one(train_set, test_set, std::move(config),
                               to_string(axis) + "=" + trimmed_number(v)));
    }
    if (axis == AblationAxis::delta1) {
        ScnConfig config = base;
        config.delta1_learnable = true;
        rows.push_back(run_one(train_set, test_set, std::move(config), "delta1=learnable"));
    }
    return rows;
}

}  // namespace scn
