#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "scn/tensor.hpp"

namespace scn {

/// A classification dataset that remembers the truth: `current_labels` may
/// drift through noise injection and relabeling, `clean_labels` never move,
/// and `corrupted_mask` records which labels were flipped at injection time.
struct LabeledDataset {
    Tensor2D features;                        // N x dim
    std::vector<int> current_labels;
    std::vector<int> clean_labels;
    std::vector<std::uint8_t> corrupted_mask; // 1 where the label was flipped
    int class_count = 0;
    std::vector<std::uint64_t> sample_ids;    // stable identifiers

    std::size_t size() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }

    /// Field lengths, label ranges, finite features. Throws DomainError.
    void validate() const;

    bool operator==(const LabeledDataset& other) const = default;
};

/// Gaussian blobs, one per class. Class c is centered at (1/sqrt(2)) * e_c,
/// so every pair of means is exactly unit distance apart; `spread` is the
/// isotropic standard deviation. Requires dim >= classes. Sample ids are
/// 0..N-1 in class-major order; identical seeds give identical datasets.
LabeledDataset generate_blobs(int classes, std::size_t per_class, std::size_t dim, double spread,
                              std::uint64_t seed);

/// Symmetric per-category label corruption.
struct NoiseSpec {
    double ratio = 0.0;      // in [0, 1)
    std::uint64_t seed = 0;
};

/// Per class c: pick exactly floor(ratio * n_c) samples uniformly without
/// replacement and replace each label with a uniform draw over the other
/// C - 1 classes (never the original). Sets corrupted_mask; clean labels are
/// untouched. Value semantics: the input is not modified.
LabeledDataset inject_noise(const LabeledDataset& ds, const NoiseSpec& spec);

/// One applied relabel event, keyed by dataset sample id.
struct RelabelRecord {
    std::size_t epoch = 0;
    std::uint64_t sample_id = 0;
    int old_label = 0;
    int new_label = 0;
    double p_max = 0.0;
    double p_given = 0.0;

    bool operator==(const RelabelRecord&) const = default;
};

/// How well relabeling cured the injected corruption.
struct RelabelQuality {
    std::optional<double> precision;  // events restoring the clean label; absent when no events
    double recall = 0.0;              // corrupted samples whose current label is clean again
    std::size_t event_count = 0;
    std::size_t corrupted_count = 0;
};

RelabelQuality relabel_quality(const LabeledDataset& ds, const std::vector<RelabelRecord>& events);

/// On-disk formats: a little-endian binary container (default) and a CSV
/// twin with identical columns. Binary round-trips bit-exactly; CSV prints
/// doubles with 17 significant digits, which also round-trips exactly.
enum class DatasetFormat { binary, csv };

void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path,
                  DatasetFormat format = DatasetFormat::binary);

/// Detects the format from the file content.
LabeledDataset load_dataset(const std::filesystem::path& path);

}  // namespace scn
