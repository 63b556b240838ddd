#include <benchmark/benchmark.h>

#include <vector>

#include "scn/attention.hpp"
#include "scn/dataset.hpp"
#include "scn/loss.hpp"
#include "scn/relabel.hpp"
#include "scn/rng.hpp"
#include "scn/tensor.hpp"
#include "scn/trainer.hpp"

using namespace scn;

namespace {

Tensor2D random_tensor(std::size_t rows, std::size_t cols, Rng& rng) {
    Tensor2D t(rows, cols);
    for (double& v : t.data()) v = rng.uniform(-1.0, 1.0);
    return t;
}

}  // namespace

static void MatmulSquare(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const Tensor2D a = random_tensor(n, n, rng);
    const Tensor2D b = random_tensor(n, n, rng);
    for (auto _ : state) {
        Tensor2D c = matmul(a, b);
        benchmark::DoNotOptimize(c.data().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(MatmulSquare)->RangeMultiplier(2)->Range(16, 128)->Complexity();

static void BackboneForwardBackward(benchmark::State& state) {
    const auto batch = static_cast<std::size_t>(state.range(0));
    Rng rng(2);
    MlpBackbone net = MlpBackbone::random({16, 256, 32}, rng);
    const Tensor2D inputs = random_tensor(batch, 16, rng);
    const Tensor2D upstream = random_tensor(batch, 32, rng);
    for (auto _ : state) {
        net.forward_features(inputs);
        BackboneGrads grads = net.backward(upstream);
        benchmark::DoNotOptimize(grads.weights.data());
    }
}
BENCHMARK(BackboneForwardBackward)->Arg(16)->Arg(64)->Arg(256);

static void WceLossBatch(benchmark::State& state) {
    const auto batch = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    const Tensor2D features = random_tensor(batch, 32, rng);
    const Classifier clf = Classifier::random(32, 8, rng);
    std::vector<double> alphas(batch);
    for (double& a : alphas) a = rng.uniform(0.05, 0.95);
    std::vector<int> labels(batch);
    for (int& y : labels) y = static_cast<int>(rng.below(8));
    for (auto _ : state) {
        WceResult r = wce_loss(clf, features, alphas, labels);
        benchmark::DoNotOptimize(r.loss);
    }
}
BENCHMARK(WceLossBatch)->Arg(64)->Arg(256);

static void AttentionWeightsBatch(benchmark::State& state) {
    Rng rng(4);
    const Tensor2D features = random_tensor(64, 32, rng);
    const AttentionHead head = AttentionHead::random(32, rng);
    for (auto _ : state) {
        std::vector<double> alphas = attention_weights(head, features);
        benchmark::DoNotOptimize(alphas.data());
    }
}
BENCHMARK(AttentionWeightsBatch);

static void RankSplitBatch(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(5);
    std::vector<double> alphas(n);
    for (double& a : alphas) a = rng.uniform(0.0, 1.0);
    for (auto _ : state) {
        RankSplit split = rank_split(alphas, 0.7);
        benchmark::DoNotOptimize(split.order.data());
    }
}
BENCHMARK(RankSplitBatch)->Arg(64)->Arg(1024);

static void RelabelBatch(benchmark::State& state) {
    Rng rng(6);
    const std::size_t n = 64, classes = 8;
    Tensor2D probs(n, classes);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < classes; ++j) {
            probs(i, j) = rng.uniform(0.01, 1.0);
            sum += probs(i, j);
        }
        for (std::size_t j = 0; j < classes; ++j) probs(i, j) /= sum;
        labels[i] = static_cast<int>(rng.below(classes));
    }
    std::vector<std::size_t> low;
    for (std::size_t i = 0; i < n; i += 3) low.push_back(i);
    for (auto _ : state) {
        RelabelResult r = relabel(probs, labels, low, 0.2);
        benchmark::DoNotOptimize(r.labels.data());
    }
}
BENCHMARK(RelabelBatch);

static void TrainEpochDeskScale(benchmark::State& state) {
    ScnConfig cfg;
    cfg.seed = 7;
    LabeledDataset ds = generate_blobs(8, 250, 16, 0.25, 70);
    ds = inject_noise(ds, {0.3, 71});
    ScnModel model = make_model(cfg, ds.dim(), ds.class_count);
    SgdOptimizer opt = make_optimizer(cfg);
    std::size_t epoch = 0;
    for (auto _ : state) {
        EpochMetrics m = train_epoch(model, ds, cfg, epoch++, opt);
        benchmark::DoNotOptimize(m.total_loss);
    }
}
BENCHMARK(TrainEpochDeskScale)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
