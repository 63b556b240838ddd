#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "scn/attention.hpp"
#include "scn/loss.hpp"
#include "scn/mlp.hpp"
#include "scn/rng.hpp"

namespace scn {

/// Everything SGD touches: backbone, importance head, classifier, and the
/// rank-regularization margin (a live parameter only in learnable mode).
struct ScnModel {
    MlpBackbone backbone;
    AttentionHead attention;
    Classifier classifier;
    double delta1 = 0.15;

    /// Seeded init. Draw order is fixed (backbone layers, attention head,
    /// classifier) so identical seeds give identical models.
    static ScnModel random(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                           std::size_t feature_dim, int classes, double delta1, Rng& rng);

    std::size_t feature_dim() const { return backbone.feature_dim(); }
    int class_count() const { return classifier.class_count(); }

    // Flat parameter vector in the order: backbone, attention weights
    // (+ bias when enabled), classifier, then delta1 when included.
    std::size_t parameter_count(bool include_delta1) const;
    std::vector<double> flatten_params(bool include_delta1) const;
    void set_params(const std::vector<double>& flat, bool include_delta1);

    bool operator==(const ScnModel& other) const;
};

/// Versioned little-endian binary checkpoint; write-then-read round-trips
/// bit-exactly.
void save_checkpoint(const ScnModel& model, const std::filesystem::path& path);
ScnModel load_checkpoint(const std::filesystem::path& path);

}  // namespace scn
