#include "scn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "scn/attention.hpp"
#include "scn/errors.hpp"
#include "scn/finite_diff.hpp"
#include "scn/loss.hpp"
#include "scn/rng.hpp"
#include "scn/tensor.hpp"
#include "scn/trainer.hpp"

namespace scn {

namespace {

constexpr const char* kComponents[] = {
    "wce-loss/classifier", "wce-loss/features", "wce-loss/alpha",    "rr-loss/alpha",
    "total-loss/alpha",    "attention/weights", "model/all-parameters",
};

struct Instance {
    std::size_t batch;
    std::size_t dim;
    int classes;
    Tensor2D features;         // batch x dim
    std::vector<double> alphas;
    std::vector<int> labels;
    Classifier classifier;
    double delta1;
    double gamma;
    double beta;
};

Instance random_instance(Rng& rng) {
    Instance ins;
    ins.batch = 2 + static_cast<std::size_t>(rng.below(15));   // 2..16
    ins.dim = 2 + static_cast<std::size_t>(rng.below(7));      // 2..8
    ins.classes = 2 + static_cast<int>(rng.below(7));          // 2..8
    ins.features = Tensor2D(ins.batch, ins.dim);
    for (double& v : ins.features.data()) v = rng.uniform(-1.5, 1.5);
    ins.alphas.resize(ins.batch);
    for (double& a : ins.alphas) a = rng.uniform(0.05, 0.95);
    ins.labels.resize(ins.batch);
    for (int& y : ins.labels) y = static_cast<int>(rng.below(ins.classes));
    ins.classifier = Classifier::random(ins.dim, ins.classes, rng);
    ins.delta1 = rng.uniform(0.02, 0.4);
    ins.gamma = rng.uniform(0.1, 0.9);
    ins.beta = rng.uniform(0.25, 0.75);
    return ins;
}

Tensor2D tensor_from_flat(const std::vector<double>& flat, std::size_t rows, std::size_t cols) {
    Tensor2D t(rows, cols);
    t.data() = flat;
    return t;
}

// Applies the deliberate corruption used as a negative control.
void maybe_corrupt(std::vector<double>& analytic, const std::string& component,
                   const std::string& fault) {
    if (fault == component && !analytic.empty())
        analytic[0] += 0.01 * (1.0 + std::abs(analytic[0]));
}

}  // namespace

GradCheckReport run_gradcheck(std::uint64_t seed, std::size_t instances, double tolerance,
                              double step, const std::string& inject_fault) {
    if (instances == 0) throw DomainError("run_gradcheck: need at least one instance");
    if (tolerance <= 0.0) throw DomainError("run_gradcheck: tolerance must be positive");
    if (!inject_fault.empty() &&
        std::none_of(std::begin(kComponents), std::end(kComponents),
                     [&](const char* c) { return inject_fault == c; }))
        throw DomainError("run_gradcheck: unknown component '" + inject_fault + "'");

    GradCheckReport report;
    report.tolerance = tolerance;
    report.step = step;
    for (const char* component : kComponents)
        report.entries.push_back({component, 0.0, instances, false});

    Rng rng(seed);
    for (std::size_t k = 0; k < instances; ++k) {
        Instance ins = random_instance(rng);
        auto entry = [&](const std::string& name) -> GradCheckEntry& {
            for (auto& e : report.entries)
                if (e.component == name) return e;
            throw DomainError("run_gradcheck: missing entry " + name);
        };

        // --- WCE w.r.t. classifier, features, alpha -------------------
        {
            const WceResult base =
                wce_loss(ins.classifier, ins.features, ins.alphas, ins.labels);

            std::vector<double> analytic = base.grad_classifier.data();
            maybe_corrupt(analytic, "wce-loss/classifier", inject_fault);
            std::vector<double> numeric = finite_diff_grad(
                [&](const std::vector<double>& w) {
                    Classifier c;
                    c.weights = tensor_from_flat(w, ins.dim, static_cast<std::size_t>(ins.classes));
                    return wce_loss(c, ins.features, ins.alphas, ins.labels).loss;
                },
                ins.classifier.weights.data(), step);
            auto& e1 = entry("wce-loss/classifier");
            e1.max_rel_error = std::max(e1.max_rel_error, max_rel_error(analytic, numeric));

            analytic = base.grad_features.data();
            maybe_corrupt(analytic, "wce-loss/features", inject_fault);
            numeric = finite_diff_grad(
                [&](const std::vector<double>& x) {
                    return wce_loss(ins.classifier, tensor_from_flat(x, ins.batch, ins.dim),
                                    ins.alphas, ins.labels)
                        .loss;
                },
                ins.features.data(), step);
            auto& e2 = entry("wce-loss/features");
            e2.max_rel_error = std::max(e2.max_rel_error, max_rel_error(analytic, numeric));

            analytic = base.grad_alphas;
            maybe_corrupt(analytic, "wce-loss/alpha", inject_fault);
            numeric = finite_diff_grad(
                [&](const std::vector<double>& a) {
                    return wce_loss(ins.classifier, ins.features, a, ins.labels).loss;
                },
                ins.alphas, step);
            auto& e3 = entry("wce-loss/alpha");
            e3.max_rel_error = std::max(e3.max_rel_error, max_rel_error(analytic, numeric));
        }

        // --- RR and total w.r.t. alpha, grouping frozen ----------------
        {
            const RankSplit split = rank_split(ins.alphas, ins.beta);
            // Force an active hinge with a safe margin to the boundary; the
            // inactive case has a zero gradient on both sides and would make
            // this check vacuous.
            const RrResult probe = rr_loss(ins.alphas, split.high, split.low, 0.0);
            const double active_delta1 =
                (probe.high_mean - probe.low_mean) + rng.uniform(0.01, 0.3);
            const RrResult base = rr_loss(ins.alphas, split.high, split.low, active_delta1);

            std::vector<double> analytic = base.grad_alphas;
            maybe_corrupt(analytic, "rr-loss/alpha", inject_fault);
            std::vector<double> numeric = finite_diff_grad(
                [&](const std::vector<double>& a) {
                    return rr_loss(a, split.high, split.low, active_delta1).loss;
                },
                ins.alphas, step);
            auto& e4 = entry("rr-loss/alpha");
            e4.max_rel_error = std::max(e4.max_rel_error, max_rel_error(analytic, numeric));

            const WceResult wce = wce_loss(ins.classifier, ins.features, ins.alphas, ins.labels);
            std::vector<double> total_grad(ins.batch);
            for (std::size_t i = 0; i < ins.batch; ++i)
                total_grad[i] =
                    (1.0 - ins.gamma) * wce.grad_alphas[i] + ins.gamma * base.grad_alphas[i];
            maybe_corrupt(total_grad, "total-loss/alpha", inject_fault);
            numeric = finite_diff_grad(
                [&](const std::vector<double>& a) {
                    const double w = wce_loss(ins.classifier, ins.features, a, ins.labels).loss;
                    const double r = rr_loss(a, split.high, split.low, active_delta1).loss;
                    return total_loss(w, r, ins.gamma);
                },
                ins.alphas, step);
            auto& e5 = entry("total-loss/alpha");
            e5.max_rel_error = std::max(e5.max_rel_error, max_rel_error(total_grad, numeric));
        }

        // --- Attention head through the WCE alpha path -----------------
        {
            Rng head_rng(derive_seed(seed, 1000 + k));
            const AttentionHead head = AttentionHead::random(ins.dim, head_rng);
            const std::vector<double> alphas = attention_weights(head, ins.features);
            const WceResult wce = wce_loss(ins.classifier, ins.features, alphas, ins.labels);
            Tensor2D sink(ins.batch, ins.dim);
            std::vector<double> analytic =
                attention_backward(head, ins.features, alphas, wce.grad_alphas, sink).weights;
            maybe_corrupt(analytic, "attention/weights", inject_fault);
            const std::vector<double> numeric = finite_diff_grad(
                [&](const std::vector<double>& w) {
                    AttentionHead h = head;
                    h.weights = w;
                    const std::vector<double> a = attention_weights(h, ins.features);
                    return wce_loss(ins.classifier, ins.features, a, ins.labels).loss;
                },
                head.weights, step);
            auto& e6 = entry("attention/weights");
            e6.max_rel_error = std::max(e6.max_rel_error, max_rel_error(analytic, numeric));
        }

        // --- Full model end-to-end, learnable margin included ----------
        {
            ScnConfig config;
            config.gamma = ins.gamma;
            config.beta = ins.beta;
            config.delta1 = ins.delta1;
            config.delta1_learnable = true;
            config.hidden = {3 + static_cast<std::size_t>(rng.below(4))};
            config.feature_dim = ins.dim;
            config.seed = derive_seed(seed, 2000 + k);

            const std::size_t input_dim = 2 + static_cast<std::size_t>(rng.below(5));
            Tensor2D inputs(ins.batch, input_dim);
            for (double& v : inputs.data()) v = rng.uniform(-1.5, 1.5);

            ScnModel model = make_model(config, input_dim, ins.classes);
            model.delta1 = ins.delta1;

            // Freeze the grouping observed at the base point.
            BatchGradients base = batch_gradients(model, inputs, ins.labels, config);
            const RankSplit frozen = base.state.split;
            std::vector<double> analytic = std::move(base.grads);
            maybe_corrupt(analytic, "model/all-parameters", inject_fault);
            const std::vector<double> numeric = finite_diff_grad(
                [&](const std::vector<double>& p) {
                    ScnModel probe = model;
                    probe.set_params(p, true);
                    return batch_gradients(probe, inputs, ins.labels, config, &frozen).total;
                },
                model.flatten_params(true), step);
            auto& e7 = entry("model/all-parameters");
            e7.max_rel_error = std::max(e7.max_rel_error, max_rel_error(analytic, numeric));
        }
    }

    report.passed = true;
    for (auto& e : report.entries) {
        e.passed = e.max_rel_error < tolerance;
        report.passed = report.passed && e.passed;
    }
    return report;
}

}  // namespace scn
