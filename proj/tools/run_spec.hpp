#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scn/dataset.hpp"
#include "scn/trainer.hpp"

namespace scn::cli {

/// Where the experiment data comes from: files when paths are set, otherwise
/// seeded blob generation (train/test streams derived from the master seed).
struct DataSpec {
    std::string train_file;
    std::string test_file;
    int classes = 8;
    std::size_t per_class = 250;
    std::size_t test_per_class = 100;
    std::size_t dim = 16;
    double spread = 0.25;
    double noise = 0.0;           // injected into the training split
    std::string format = "bin";   // gen-data output: bin | csv
};

/// A fully resolved command invocation. Serialized as the manifest; a run is
/// reproducible from its manifest alone.
struct RunSpec {
    std::string command;
    DataSpec data;
    ScnConfig config;
    std::vector<double> noise_levels = {0.1, 0.2, 0.3};  // compare sweep
    std::string axis = "gamma";                          // ablate
    std::vector<double> values;                          // ablate (empty: per-axis default)
    std::size_t instances = 20;                          // gradcheck
    double tolerance = 1e-4;                             // gradcheck
    double fd_step = 1e-6;                               // gradcheck
    std::string inject_fault;                            // gradcheck negative control
    std::string out_dir = "scn-out";
};

/// Manifest round-trip. Reading accepts any subset of keys over defaults.
std::string spec_to_json(const RunSpec& spec);
RunSpec spec_from_json_file(const std::filesystem::path& path);

void write_manifest(const RunSpec& spec, const std::filesystem::path& out_dir);

/// Assembled experiment data per the spec: generated or loaded, noise
/// injected into the training split.
struct ExperimentData {
    LabeledDataset train;
    LabeledDataset test;
};
ExperimentData assemble_data(const RunSpec& spec);

/// Train-split noise injection at an explicit ratio (the compare sweep).
LabeledDataset noisy_train_split(const LabeledDataset& clean, double ratio, std::uint64_t seed,
                                 std::uint64_t level_index);

}  // namespace scn::cli
