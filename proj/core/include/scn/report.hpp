#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scn/dataset.hpp"
#include "scn/trainer.hpp"

namespace scn {

/// Shortest-exact rendering of a double (17 significant digits): reading the
/// text back yields the identical bits, so CSV output is reproducible.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);  // empty cell when absent

/// One row per epoch with every EpochMetrics field; optionals print as empty
/// cells.
void write_metrics_csv(const std::filesystem::path& path, const std::vector<EpochMetrics>& trace);

/// One row per relabel event: epoch, sample id, old/new label, probabilities.
void write_relabels_csv(const std::filesystem::path& path,
                        const std::vector<RelabelRecord>& events);

/// One row per ablation run.
void write_ablation_csv(const std::filesystem::path& path, const std::vector<AblationRow>& rows);

}  // namespace scn
