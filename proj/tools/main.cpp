#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_spec.hpp"

using scn::cli::RunSpec;

namespace {

// Flag values live here during parsing; anything the user actually passed is
// copied onto the spec afterwards, so flags override --config which overrides
// the built-in defaults.
struct FlagValues {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;
    double noise = 0.0;
    std::vector<double> noise_levels;
    double beta = 0.0, gamma = 0.0, delta1 = 0.0, delta2 = 0.0;
    bool delta1_learnable = false;
    std::size_t epochs = 0, batch_size = 0, relabel_start = 0;
    bool no_weighting = false, no_rankreg = false, no_relabel = false;
    int classes = 0;
    std::size_t per_class = 0, test_per_class = 0, dim = 0;
    double spread = 0.0;
    std::string train_file, test_file, format;
    std::vector<std::size_t> hidden;
    std::size_t feature_dim = 0;
    double lr = 0.0, lr_decay_factor = 0.0, momentum = 0.0;
    std::vector<std::size_t> lr_decay_epochs;
    std::string axis;
    std::vector<double> values;
    std::size_t instances = 0;
    double tolerance = 0.0, fd_step = 0.0;
    std::string inject_fault;
};

void add_common_options(CLI::App* cmd, FlagValues& v) {
    cmd->add_option("--config", v.config_path, "JSON config/manifest to start from");
    cmd->add_option("--seed", v.seed, "Master seed for data, init and shuffling");
    cmd->add_option("--out", v.out, "Output directory")->envname("SCN_OUT_DIR");
    cmd->add_option("--beta", v.beta, "High-importance share of each batch (0,1)");
    cmd->add_option("--gamma", v.gamma, "Weight of the rank term in the total loss [0,1]");
    cmd->add_option("--delta1", v.delta1, "Rank-regularization margin");
    cmd->add_flag("--delta1-learnable", v.delta1_learnable, "Train delta1 by gradient descent");
    cmd->add_option("--delta2", v.delta2, "Relabeling probability-gap threshold");
    cmd->add_option("--epochs", v.epochs, "Training epochs");
    cmd->add_option("--batch-size", v.batch_size, "Mini-batch size");
    cmd->add_option("--relabel-start", v.relabel_start, "First epoch that may relabel");
    cmd->add_flag("--no-weighting", v.no_weighting, "Disable importance weighting (alpha = 1)");
    cmd->add_flag("--no-rankreg", v.no_rankreg, "Disable the rank-regularization term");
    cmd->add_flag("--no-relabel", v.no_relabel, "Disable relabeling");
    cmd->add_option("--classes", v.classes, "Generated classes");
    cmd->add_option("--per-class", v.per_class, "Generated training samples per class");
    cmd->add_option("--test-per-class", v.test_per_class, "Generated test samples per class");
    cmd->add_option("--dim", v.dim, "Generated feature dimension");
    cmd->add_option("--spread", v.spread, "Blob standard deviation");
    cmd->add_option("--data", v.train_file, "Training dataset file (instead of generation)");
    cmd->add_option("--test-data", v.test_file, "Test dataset file (instead of generation)");
    cmd->add_option("--hidden", v.hidden, "Backbone hidden widths");
    cmd->add_option("--feature-dim", v.feature_dim, "Backbone feature dimension");
    cmd->add_option("--lr", v.lr, "Base learning rate");
    cmd->add_option("--lr-decay-epochs", v.lr_decay_epochs, "Epochs at which the rate decays");
    cmd->add_option("--lr-decay-factor", v.lr_decay_factor, "Decay multiplier in (0,1)");
    cmd->add_option("--momentum", v.momentum, "SGD momentum [0,1)");
}

void apply_flags(const CLI::App* cmd, const FlagValues& v, RunSpec& spec) {
    auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (passed("--seed")) spec.config.seed = v.seed;
    if (passed("--out")) spec.out_dir = v.out;
    if (passed("--beta")) spec.config.beta = v.beta;
    if (passed("--gamma")) spec.config.gamma = v.gamma;
    if (passed("--delta1")) spec.config.delta1 = v.delta1;
    if (passed("--delta1-learnable")) spec.config.delta1_learnable = true;
    if (passed("--delta2")) spec.config.delta2 = v.delta2;
    if (passed("--epochs")) spec.config.epochs = v.epochs;
    if (passed("--batch-size")) spec.config.batch_size = v.batch_size;
    if (passed("--relabel-start")) spec.config.relabel_start_epoch = v.relabel_start;
    if (passed("--no-weighting")) spec.config.modules.weighting = false;
    if (passed("--no-rankreg")) spec.config.modules.rank_reg = false;
    if (passed("--no-relabel")) spec.config.modules.relabel = false;
    if (passed("--classes")) spec.data.classes = v.classes;
    if (passed("--per-class")) spec.data.per_class = v.per_class;
    if (passed("--test-per-class")) spec.data.test_per_class = v.test_per_class;
    if (passed("--dim")) spec.data.dim = v.dim;
    if (passed("--spread")) spec.data.spread = v.spread;
    if (passed("--data")) spec.data.train_file = v.train_file;
    if (passed("--test-data")) spec.data.test_file = v.test_file;
    if (passed("--hidden")) spec.config.hidden = v.hidden;
    if (passed("--feature-dim")) spec.config.feature_dim = v.feature_dim;
    if (passed("--lr")) spec.config.lr.base_rate = v.lr;
    if (passed("--lr-decay-epochs")) spec.config.lr.decay_epochs = v.lr_decay_epochs;
    if (passed("--lr-decay-factor")) spec.config.lr.decay_factor = v.lr_decay_factor;
    if (passed("--momentum")) spec.config.momentum = v.momentum;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SCN: noise-robust classification training with importance weighting,"
                 " rank regularization and relabeling"};
    app.require_subcommand(1);

    FlagValues train_v, compare_v, ablate_v, gradcheck_v, gendata_v;

    CLI::App* train_cmd = app.add_subcommand("train", "Train one model and write metrics");
    add_common_options(train_cmd, train_v);
    train_cmd->add_option("--noise", train_v.noise, "Label corruption ratio for the train split");

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Baseline vs SCN across noise ratios, shared init");
    add_common_options(compare_cmd, compare_v);
    compare_cmd->add_option("--noise", compare_v.noise_levels,
                            "Noise ratios to sweep (default 0.1 0.2 0.3)");

    CLI::App* ablate_cmd = app.add_subcommand("ablate", "Sweep one parameter or the module grid");
    add_common_options(ablate_cmd, ablate_v);
    ablate_cmd->add_option("--noise", ablate_v.noise, "Label corruption ratio for the train split");
    ablate_cmd->add_option("--axis", ablate_v.axis, "gamma|delta1|delta2|beta|modules");
    ablate_cmd->add_option("--values", ablate_v.values, "Sweep values (default per axis)");

    CLI::App* gradcheck_cmd =
        app.add_subcommand("gradcheck", "Verify analytic gradients against finite differences");
    add_common_options(gradcheck_cmd, gradcheck_v);
    gradcheck_cmd->add_option("--instances", gradcheck_v.instances, "Random instances per component");
    gradcheck_cmd->add_option("--tolerance", gradcheck_v.tolerance, "Max relative error allowed");
    gradcheck_cmd->add_option("--step", gradcheck_v.fd_step, "Central-difference step");
    gradcheck_cmd->add_option("--inject-fault", gradcheck_v.inject_fault,
                              "Corrupt one component's analytic gradient (negative control)");

    CLI::App* gendata_cmd = app.add_subcommand("gen-data", "Generate a dataset file");
    add_common_options(gendata_cmd, gendata_v);
    gendata_cmd->add_option("--noise", gendata_v.noise, "Label corruption ratio");
    gendata_cmd->add_option("--format", gendata_v.format, "bin|csv (default bin)");

    CLI11_PARSE(app, argc, argv);

    auto build_spec = [](const CLI::App* cmd, FlagValues& v, const char* name) {
        RunSpec spec;
        if (cmd->count("--config")) spec = scn::cli::spec_from_json_file(v.config_path);
        spec.command = name;
        return spec;
    };

    try {
        if (train_cmd->parsed()) {
            RunSpec spec = build_spec(train_cmd, train_v, "train");
            apply_flags(train_cmd, train_v, spec);
            if (train_cmd->count("--noise")) spec.data.noise = train_v.noise;
            return scn::cli::cmd_train(spec);
        }
        if (compare_cmd->parsed()) {
            RunSpec spec = build_spec(compare_cmd, compare_v, "compare");
            apply_flags(compare_cmd, compare_v, spec);
            if (compare_cmd->count("--noise")) spec.noise_levels = compare_v.noise_levels;
            return scn::cli::cmd_compare(spec);
        }
        if (ablate_cmd->parsed()) {
            RunSpec spec = build_spec(ablate_cmd, ablate_v, "ablate");
            apply_flags(ablate_cmd, ablate_v, spec);
            if (ablate_cmd->count("--noise")) spec.data.noise = ablate_v.noise;
            if (ablate_cmd->count("--axis")) spec.axis = ablate_v.axis;
            if (ablate_cmd->count("--values")) spec.values = ablate_v.values;
            return scn::cli::cmd_ablate(spec);
        }
        if (gradcheck_cmd->parsed()) {
            RunSpec spec = build_spec(gradcheck_cmd, gradcheck_v, "gradcheck");
            apply_flags(gradcheck_cmd, gradcheck_v, spec);
            if (gradcheck_cmd->count("--instances")) spec.instances = gradcheck_v.instances;
            if (gradcheck_cmd->count("--tolerance")) spec.tolerance = gradcheck_v.tolerance;
            if (gradcheck_cmd->count("--step")) spec.fd_step = gradcheck_v.fd_step;
            if (gradcheck_cmd->count("--inject-fault")) spec.inject_fault = gradcheck_v.inject_fault;
            return scn::cli::cmd_gradcheck(spec);
        }
        if (gendata_cmd->parsed()) {
            RunSpec spec = build_spec(gendata_cmd, gendata_v, "gen-data");
            apply_flags(gendata_cmd, gendata_v, spec);
            if (gendata_cmd->count("--noise")) spec.data.noise = gendata_v.noise;
            if (gendata_cmd->count("--format")) spec.data.format = gendata_v.format;
            return scn::cli::cmd_gen_data(spec);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
