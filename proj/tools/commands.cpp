#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "scn/errors.hpp"
#include "scn/gradcheck.hpp"
#include "scn/model.hpp"
#include "scn/report.hpp"
#include "scn/rng.hpp"

namespace scn::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path prepare_out(const RunSpec& spec) {
    fs::path out(spec.out_dir);
    fs::create_directories(out);
    write_manifest(spec, out);
    return out;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json optional_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

/// One full training run; fills the summary and returns the final metrics.
struct RunOutcome {
    TrainResult result;
    Evaluation test_eval;
    ScnModel model;
    LabeledDataset train_final;  // labels after relabeling
};

RunOutcome run_training(const ScnConfig& config, const LabeledDataset& train_set,
                        const LabeledDataset& test_set) {
    RunOutcome outcome;
    outcome.train_final = train_set;
    outcome.model = make_model(config, train_set.dim(), train_set.class_count);
    outcome.result = train(outcome.model, outcome.train_final, config, &test_set);
    outcome.test_eval = evaluate(outcome.model, test_set);
    return outcome;
}

json summarize_run(const RunOutcome& run) {
    json s;
    s["final_test_accuracy"] = run.test_eval.accuracy;
    s["final_test_mean_class_accuracy"] = run.test_eval.mean_class_accuracy;
    if (!run.result.trace.empty()) {
        const EpochMetrics& last = run.result.trace.back();
        s["final_train_accuracy"] = last.train_accuracy;
        s["final_wce_loss"] = last.wce_loss;
        s["final_rr_loss"] = last.rr_loss;
        s["final_total_loss"] = last.total_loss;
        s["alpha_mean_clean"] = optional_json(last.alpha_mean_clean);
        s["alpha_mean_corrupted"] = optional_json(last.alpha_mean_corrupted);
        s["delta1_final"] = last.delta1;
    }
    const RelabelQuality quality =
        relabel_quality(run.train_final, run.result.relabel_events);
    s["relabel_events"] = run.result.relabel_events.size();
    s["relabel_precision"] = optional_json(quality.precision);
    s["relabel_recall"] = quality.recall;
    return s;
}

}  // namespace

int cmd_train(const RunSpec& spec) {
    spec.config.validate();
    const fs::path out = prepare_out(spec);
    const ExperimentData data = assemble_data(spec);

    const RunOutcome run = run_training(spec.config, data.train, data.test);

    write_metrics_csv(out / "metrics.csv", run.result.trace);
    write_relabels_csv(out / "relabels.csv", run.result.relabel_events);
    save_checkpoint(run.model, out / "model.ckpt");
    write_json(out / "summary.json", summarize_run(run));

    std::printf("train: %zu epochs, test accuracy %.4f (mean class %.4f)\n",
                spec.config.epochs, run.test_eval.accuracy, run.test_eval.mean_class_accuracy);
    std::printf("outputs in %s\n", out.string().c_str());
    return 0;
}

int cmd_compare(const RunSpec& spec) {
    spec.config.validate();
    if (spec.noise_levels.empty()) throw DomainError("compare: need at least one noise level");
    for (double r : spec.noise_levels)
        if (r < 0.0 || r >= 1.0) throw DomainError("compare: noise ratio must lie in [0, 1)");

    const fs::path out = prepare_out(spec);

    // Shared clean splits; baseline and SCN see identical initial weights and
    // batch order because they share the master seed.
    RunSpec clean_spec = spec;
    clean_spec.data.noise = 0.0;
    const ExperimentData data = assemble_data(clean_spec);

    ScnConfig baseline_config = spec.config;
    baseline_config.modules = {false, false, false};

    std::ofstream csv(out / "compare.csv");
    if (!csv) throw IoError("cannot write compare.csv");
    csv << "noise,baseline_accuracy,scn_accuracy,delta,baseline_mean_class_accuracy,"
           "scn_mean_class_accuracy,alpha_mean_clean,alpha_mean_corrupted,"
           "relabel_events,relabel_precision,relabel_recall\n";

    json rows = json::array();
    for (std::size_t level = 0; level < spec.noise_levels.size(); ++level) {
        const double ratio = spec.noise_levels[level];
        const LabeledDataset noisy =
            noisy_train_split(data.train, ratio, spec.config.seed, level);

        const RunOutcome baseline = run_training(baseline_config, noisy, data.test);
        const RunOutcome scn = run_training(spec.config, noisy, data.test);

        const EpochMetrics& last = scn.result.trace.empty() ? EpochMetrics{}
                                                            : scn.result.trace.back();
        const RelabelQuality quality =
            relabel_quality(scn.train_final, scn.result.relabel_events);

        csv << format_double(ratio) << ',' << format_double(baseline.test_eval.accuracy) << ','
            << format_double(scn.test_eval.accuracy) << ','
            << format_double(scn.test_eval.accuracy - baseline.test_eval.accuracy) << ','
            << format_double(baseline.test_eval.mean_class_accuracy) << ','
            << format_double(scn.test_eval.mean_class_accuracy) << ','
            << format_optional(last.alpha_mean_clean) << ','
            << format_optional(last.alpha_mean_corrupted) << ','
            << scn.result.relabel_events.size() << ',' << format_optional(quality.precision)
            << ',' << format_double(quality.recall) << '\n';

        json row;
        row["noise"] = ratio;
        row["baseline_accuracy"] = baseline.test_eval.accuracy;
        row["scn_accuracy"] = scn.test_eval.accuracy;
        row["delta"] = scn.test_eval.accuracy - baseline.test_eval.accuracy;
        row["alpha_mean_clean"] = optional_json(last.alpha_mean_clean);
        row["alpha_mean_corrupted"] = optional_json(last.alpha_mean_corrupted);
        row["relabel_events"] = scn.result.relabel_events.size();
        row["relabel_precision"] = optional_json(quality.precision);
        row["relabel_recall"] = quality.recall;
        rows.push_back(row);

        std::printf("noise %4.0f%%: baseline %.4f  scn %.4f  delta %+.4f\n", ratio * 100,
                    baseline.test_eval.accuracy, scn.test_eval.accuracy,
                    scn.test_eval.accuracy - baseline.test_eval.accuracy);
    }
    if (!csv) throw IoError("write failed for compare.csv");
    csv.close();
    write_json(out / "summary.json", json{{"rows", rows}});
    std::printf("outputs in %s\n", out.string().c_str());
    return 0;
}

int cmd_ablate(const RunSpec& spec) {
    spec.config.validate();
    const AblationAxis axis = ablation_axis_from_string(spec.axis);

    std::vector<double> values = spec.values;
    if (values.empty()) {
        switch (axis) {
            case AblationAxis::gamma: values = {0.2, 0.3, 0.5, 0.6, 0.8}; break;
            case AblationAxis::delta1: values = {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}; break;
            case AblationAxis::delta2: values = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}; break;
            case AblationAxis::beta: values = {0.5, 0.6, 0.7, 0.8, 0.9}; break;
            case AblationAxis::modules: break;
        }
    }

    const fs::path out = prepare_out(spec);
    const ExperimentData data = assemble_data(spec);
    const std::vector<AblationRow> rows =
        ablation_grid(data.train, data.test, spec.config, axis, values);

    write_ablation_csv(out / "ablation.csv", rows);
    json summary = json::array();
    for (const AblationRow& row : rows) {
        summary.push_back({{"run", row.label},
                           {"test_accuracy", row.test_accuracy},
                           {"test_mean_class_accuracy", row.test_mean_class_accuracy}});
        std::printf("%-22s test accuracy %.4f\n", row.label.c_str(), row.test_accuracy);
    }
    write_json(out / "summary.json", json{{"rows", summary}});
    std::printf("outputs in %s\n", out.string().c_str());
    return 0;
}

int cmd_gradcheck(const RunSpec& spec) {
    const GradCheckReport report = run_gradcheck(spec.config.seed, spec.instances, spec.tolerance,
                                                 spec.fd_step, spec.inject_fault);
    for (const GradCheckEntry& e : report.entries)
        std::printf("%-24s max rel error %.3e over %zu instances  [%s]\n", e.component.c_str(),
                    e.max_rel_error, e.instances, e.passed ? "ok" : "FAIL");

    if (!spec.out_dir.empty()) {
        const fs::path out = prepare_out(spec);
        std::ofstream csv(out / "gradcheck.csv");
        if (!csv) throw IoError("cannot write gradcheck.csv");
        csv << "component,max_rel_error,instances,passed\n";
        for (const GradCheckEntry& e : report.entries)
            csv << e.component << ',' << format_double(e.max_rel_error) << ',' << e.instances
                << ',' << (e.passed ? 1 : 0) << '\n';
    }

    if (!report.passed) {
        std::fprintf(stderr, "gradcheck FAILED (tolerance %.1e)\n", report.tolerance);
        return 1;
    }
    std::printf("gradcheck passed (tolerance %.1e)\n", report.tolerance);
    return 0;
}

int cmd_gen_data(const RunSpec& spec) {
    if (spec.data.format != "bin" && spec.data.format != "csv")
        throw DomainError("gen-data: format must be bin or csv");
    const fs::path out = prepare_out(spec);

    LabeledDataset ds =
        generate_blobs(spec.data.classes, spec.data.per_class, spec.data.dim, spec.data.spread,
                       derive_seed(spec.config.seed, seed_stream::kTrainData));
    if (spec.data.noise > 0.0)
        ds = inject_noise(ds,
                          {spec.data.noise, derive_seed(spec.config.seed, seed_stream::kNoise)});

    const bool binary = spec.data.format == "bin";
    const fs::path path = out / (binary ? "dataset.bin" : "dataset.csv");
    save_dataset(ds, path, binary ? DatasetFormat::binary : DatasetFormat::csv);
    std::printf("gen-data: wrote %zu samples (%d classes, dim %zu) to %s\n", ds.size(),
                ds.class_count, ds.dim(), path.string().c_str());
    return 0;
}

}  // namespace scn::cli
