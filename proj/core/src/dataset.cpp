#include "scn/dataset.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "scn/errors.hpp"
#include "scn/rng.hpp"

namespace scn {

void LabeledDataset::validate() const {
    const std::size_t n = size();
    if (current_labels.size() != n || clean_labels.size() != n || corrupted_mask.size() != n ||
        sample_ids.size() != n)
        throw DomainError("LabeledDataset: field lengths disagree with the feature rows");
    if (class_count < 2) throw DomainError("LabeledDataset: need at least 2 classes");
    for (std::size_t i = 0; i < n; ++i) {
        if (current_labels[i] < 0 || current_labels[i] >= class_count)
            throw DomainError("LabeledDataset: current label of sample " + std::to_string(i) +
                              " outside [0, " + std::to_string(class_count) + ")");
        if (clean_labels[i] < 0 || clean_labels[i] >= class_count)
            throw DomainError("LabeledDataset: clean label of sample " + std::to_string(i) +
                              " outside [0, " + std::to_string(class_count) + ")");
    }
    if (!features.all_finite()) throw DomainError("LabeledDataset: non-finite feature");
}

LabeledDataset generate_blobs(int classes, std::size_t per_class, std::size_t dim, double spread,
                              std::uint64_t seed) {
    if (classes < 2) throw DomainError("generate_blobs: need at least 2 classes");
    if (per_class < 2) throw DomainError("generate_blobs: need at least 2 samples per class");
    if (!(spread > 0.0)) throw DomainError("generate_blobs: spread must be positive");
    if (dim < static_cast<std::size_t>(classes))
        throw DomainError("generate_blobs: dim must be >= classes for the basis layout");

    const std::size_t n = static_cast<std::size_t>(classes) * per_class;
    const double mean_scale = 1.0 / std::sqrt(2.0);  // unit pairwise separation

    LabeledDataset ds;
    ds.features = Tensor2D(n, dim);
    ds.current_labels.resize(n);
    ds.clean_labels.resize(n);
    ds.corrupted_mask.assign(n, 0);
    ds.class_count = classes;
    ds.sample_ids.resize(n);

    Rng rng(seed);
    std::size_t row = 0;
    for (int c = 0; c < classes; ++c) {
        for (std::size_t s = 0; s < per_class; ++s, ++row) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double mean = (d == static_cast<std::size_t>(c)) ? mean_scale : 0.0;
                ds.features(row, d) = mean + spread * rng.normal();
            }
            ds.current_labels[row] = c;
            ds.clean_labels[row] = c;
            ds.sample_ids[row] = row;
        }
    }
    return ds;
}

LabeledDataset inject_noise(const LabeledDataset& ds, const NoiseSpec& spec) {
    if (spec.ratio < 0.0 || spec.ratio >= 1.0)
        throw DomainError("inject_noise: ratio must lie in [0, 1)");
    ds.validate();

    LabeledDataset noisy = ds;
    if (spec.ratio == 0.0) return noisy;

    const int classes = ds.class_count;
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(classes));
    for (std::size_t i = 0; i < ds.size(); ++i)
        by_class[static_cast<std::size_t>(ds.clean_labels[i])].push_back(i);

    Rng rng(spec.seed);
    for (int c = 0; c < classes; ++c) {
        auto& members = by_class[static_cast<std::size_t>(c)];
        const std::size_t corrupt =
            static_cast<std::size_t>(std::floor(spec.ratio * static_cast<double>(members.size())));
        rng.shuffle(members);
        for (std::size_t k = 0; k < corrupt; ++k) {
            const std::size_t i = members[k];
            // Uniform over the other C-1 classes; never the original.
            int fake = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes - 1)));
            if (fake >= c) ++fake;
            noisy.current_labels[i] = fake;
            noisy.corrupted_mask[i] = 1;
        }
    }
    return noisy;
}

RelabelQuality relabel_quality(const LabeledDataset& ds, const std::vector<RelabelRecord>& events) {
    std::unordered_map<std::uint64_t, std::size_t> index_of;
    index_of.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) index_of.emplace(ds.sample_ids[i], i);

    RelabelQuality q;
    q.event_count = events.size();
    std::size_t restoring = 0;
    for (const RelabelRecord& ev : events) {
        auto it = index_of.find(ev.sample_id);
        if (it == index_of.end())
            throw DomainError("relabel_quality: unknown sample id " + std::to_string(ev.sample_id));
        if (ev.new_label == ds.clean_labels[it->second]) ++restoring;
    }
    if (!events.empty())
        q.precision = static_cast<double>(restoring) / static_cast<double>(events.size());

    std::size_t corrupted = 0, cured = 0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (!ds.corrupted_mask[i]) continue;
        ++corrupted;
        if (ds.current_labels[i] == ds.clean_labels[i]) ++cured;
    }
    q.corrupted_count = corrupted;
    q.recall = corrupted ? static_cast<double>(cured) / static_cast<double>(corrupted) : 0.0;
    return q;
}

}  // namespace scn
