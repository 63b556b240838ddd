#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scn/dataset.hpp"
#include "scn/model.hpp"
#include "scn/sgd.hpp"

namespace scn {

/// The three mechanisms, independently switchable. All off reproduces a
/// plain cross-entropy trainer bit-for-bit.
struct ModuleSwitches {
    bool weighting = true;
    bool rank_reg = true;
    bool relabel = true;

    bool operator==(const ModuleSwitches&) const = default;
};

struct ScnConfig {
    double beta = 0.7;                  // high-importance share of each batch
    double gamma = 0.5;                 // total = gamma * RR + (1 - gamma) * WCE
    double delta1 = 0.15;               // rank-regularization margin
    bool delta1_learnable = false;
    double delta2 = 0.2;                // relabeling threshold
    std::size_t relabel_start_epoch = 10;
    std::size_t epochs = 40;
    std::size_t batch_size = 64;
    LrSchedule lr;
    double momentum = 0.9;
    std::uint64_t seed = 1;             // master seed (model init + shuffles)
    ModuleSwitches modules;
    std::vector<std::size_t> hidden = {256};
    std::size_t feature_dim = 32;

    void validate() const;  // throws DomainError

    bool operator==(const ScnConfig&) const = default;
};

/// Child-seed streams derived from the master seed. Fixed constants so other
/// components (CLI, tests) can reproduce any stream independently.
namespace seed_stream {
inline constexpr std::uint64_t kModelInit = 1;
inline constexpr std::uint64_t kShuffle = 2;
inline constexpr std::uint64_t kTrainData = 3;
inline constexpr std::uint64_t kTestData = 4;
inline constexpr std::uint64_t kNoise = 5;
}  // namespace seed_stream

/// Mini-batch order for one epoch; pure function of (count, seed, epoch).
std::vector<std::size_t> shuffled_indices(std::size_t count, std::uint64_t seed,
                                          std::size_t epoch);

/// Everything measured during one epoch. Optional fields are absent when
/// they have no denominator (no test set, no corrupted samples, no events).
struct EpochMetrics {
    std::size_t epoch = 0;
    double wce_loss = 0.0;
    double rr_loss = 0.0;
    double total_loss = 0.0;
    double train_accuracy = 0.0;
    std::optional<double> test_accuracy;
    std::optional<double> test_mean_class_accuracy;
    std::optional<double> alpha_mean_clean;
    std::optional<double> alpha_mean_corrupted;
    std::size_t relabel_events = 0;
    std::optional<double> relabel_precision;
    double relabel_recall = 0.0;
    double learning_rate = 0.0;
    double delta1 = 0.0;

    bool operator==(const EpochMetrics&) const = default;
};

struct Evaluation {
    double accuracy = 0.0;
    double mean_class_accuracy = 0.0;
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
};

struct TrainResult {
    std::vector<EpochMetrics> trace;
    std::vector<RelabelRecord> relabel_events;
};

/// Model seeded from config (stream kModelInit) and sized for the dataset.
ScnModel make_model(const ScnConfig& config, std::size_t input_dim, int classes);

SgdOptimizer make_optimizer(const ScnConfig& config);

/// Loss values and flat parameter gradients for one batch — exactly what
/// train_epoch computes between the forward pass and the SGD step. The
/// gradient layout matches ScnModel::flatten_params(config.delta1_learnable).
/// `frozen_split` overrides the rank grouping (finite-difference checks need
/// the assignment held constant); by default it is derived from the weights.
struct BatchGradients {
    double total = 0.0;  // gamma-combined; exactly the WCE term when the hinge is absent
    double wce = 0.0;
    double rr = 0.0;
    std::vector<double> grads;
    BatchState state;
};

BatchGradients batch_gradients(ScnModel& model, const Tensor2D& inputs,
                               const std::vector<int>& labels, const ScnConfig& config,
                               const RankSplit* frozen_split = nullptr);

/// One epoch of SCN training: seeded shuffle, per batch a forward pass
/// through backbone + importance head + classifier, weighted cross-entropy,
/// rank split + hinge (skipped for batches of one sample), backprop, SGD,
/// and — from relabel_start_epoch on — label correction in the low group,
/// persisted into the dataset. Relabel events are appended to event_log
/// when given; test metrics are filled when a test set is given.
EpochMetrics train_epoch(ScnModel& model, LabeledDataset& dataset, const ScnConfig& config,
                         std::size_t epoch, SgdOptimizer& optimizer,
                         std::vector<RelabelRecord>* event_log = nullptr,
                         const LabeledDataset* test = nullptr);

/// Full training run over config.epochs epochs. Deterministic per seed:
/// identical inputs give bit-identical traces.
TrainResult train(ScnModel& model, LabeledDataset& dataset, const ScnConfig& config,
                  const LabeledDataset* test = nullptr);

/// Accuracy, mean class accuracy and the confusion matrix, computed on
/// unscaled logits: importance weights are a training-time device and never
/// enter inference.
Evaluation evaluate(const ScnModel& model, const LabeledDataset& dataset);

// ---------------------------------------------------------------------------
// Ablations.
// ---------------------------------------------------------------------------

enum class AblationAxis { gamma, delta1, delta2, beta, modules };

AblationAxis ablation_axis_from_string(const std::string& name);
std::string to_string(AblationAxis axis);

struct AblationRow {
    std::string label;
    double test_accuracy = 0.0;
    double test_mean_class_accuracy = 0.0;
    double final_train_accuracy = 0.0;
    ScnConfig config;
};

/// One full training run per value along the axis, each from the same seed
/// and a fresh copy of the training set. Values are validated before any
/// training starts. The modules axis ignores `values` and runs the fixed
/// six-row on/off grid from baseline to full SCN; the delta1 axis appends a
/// learnable-margin row after the fixed values.
std::vector<AblationRow> ablation_grid(const LabeledDataset& train_set,
                                       const LabeledDataset& test_set, const ScnConfig& base,
                                       AblationAxis axis, const std::vector<double>& values);

}  // namespace scn
