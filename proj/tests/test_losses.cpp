#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "scn/attention.hpp"
#include "scn/errors.hpp"
#include "scn/finite_diff.hpp"
#include "scn/gradcheck.hpp"
#include "scn/loss.hpp"
#include "scn/relabel.hpp"
#include "scn/rng.hpp"
#include "scn/tensor.hpp"

#include "oracles.hpp"

using namespace scn;

namespace {

Tensor2D random_tensor(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.5,
                       double hi = 1.5) {
    Tensor2D t(rows, cols);
    for (double& v : t.data()) v = rng.uniform(lo, hi);
    return t;
}

std::vector<double> random_alphas(std::size_t n, Rng& rng) {
    std::vector<double> a(n);
    for (double& v : a) v = rng.uniform(0.05, 0.95);
    return a;
}

std::vector<int> random_labels(std::size_t n, int classes, Rng& rng) {
    std::vector<int> y(n);
    for (int& v : y) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(classes)));
    return y;
}

}  // namespace

// ---------------------------------------------------------------------------
// Attention weighting
// ---------------------------------------------------------------------------

TEST_CASE("attention: zero head maps every sample to 0.5") {
    AttentionHead head;
    head.weights.assign(4, 0.0);
    Rng rng(1);
    const auto alphas = attention_weights(head, random_tensor(6, 4, rng));
    for (double a : alphas) CHECK(a == 0.5);
}

TEST_CASE("attention: strictly increasing in the logit and always inside (0,1)") {
    AttentionHead head;
    head.weights = {1.0};
    Tensor2D features(9, 1);
    for (int i = 0; i < 9; ++i) features(i, 0) = -8.0 + 2.0 * i;  // logits -8..8
    const auto alphas = attention_weights(head, features);
    for (std::size_t i = 0; i + 1 < alphas.size(); ++i) CHECK(alphas[i] < alphas[i + 1]);
    // Saturated logits stay strictly inside the open interval.
    features(0, 0) = -500.0;
    features(8, 0) = 500.0;
    const auto extreme = attention_weights(head, features);
    for (double a : extreme) {
        CHECK(a > 0.0);
        CHECK(a < 1.0);
    }
}

TEST_CASE("attention: matches the scalar sigmoid oracle per sample") {
    Rng rng(2);
    const Tensor2D features = random_tensor(8, 5, rng);
    AttentionHead head = AttentionHead::random(5, rng);
    const auto alphas = attention_weights(head, features);
    for (std::size_t i = 0; i < 8; ++i) {
        double logit = 0.0;
        for (std::size_t d = 0; d < 5; ++d) logit += head.weights[d] * features(i, d);
        CHECK(std::abs(alphas[i] - oracles::sigmoid(logit)) < 1e-12);
    }
}

TEST_CASE("attention: bias term participates only when enabled") {
    Rng rng(3);
    const Tensor2D features = random_tensor(4, 3, rng);
    AttentionHead head = AttentionHead::random(3, rng);
    head.bias = 2.0;
    const auto without = attention_weights(head, features);
    head.use_bias = true;
    const auto with = attention_weights(head, features);
    for (std::size_t i = 0; i < 4; ++i) CHECK(with[i] > without[i]);
}

TEST_CASE("attention: dimension mismatch") {
    AttentionHead head;
    head.weights.assign(3, 0.1);
    CHECK_THROWS_AS(attention_weights(head, Tensor2D(2, 4)), ShapeError);
    CHECK_THROWS_AS(attention_weights(head, Tensor2D(0, 3)), ShapeError);
}

TEST_CASE("attention: head gradient matches finite differences") {
    Rng rng(4);
    const Tensor2D features = random_tensor(6, 4, rng);
    const AttentionHead head = AttentionHead::random(4, rng);
    std::vector<double> coeff(6);
    for (double& c : coeff) c = rng.uniform(-1.0, 1.0);

    const auto alphas = attention_weights(head, features);
    Tensor2D grad_features(6, 4);
    const auto analytic = attention_backward(head, features, alphas, coeff, grad_features).weights;
    const auto numeric = finite_diff_grad(
        [&](const std::vector<double>& w) {
            AttentionHead h = head;
            h.weights = w;
            const auto a = attention_weights(h, features);
            double loss = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) loss += coeff[i] * a[i];
            return loss;
        },
        head.weights, 1e-6);
    CHECK(max_rel_error(analytic, numeric) < 1e-6);
}

// ---------------------------------------------------------------------------
// Logit-weighted cross-entropy
// ---------------------------------------------------------------------------

TEST_CASE("wce: with unit weights it reduces to standard cross-entropy") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + rng.below(8);
        const std::size_t dim = 2 + rng.below(5);
        const int classes = 2 + static_cast<int>(rng.below(5));
        const Tensor2D features = random_tensor(n, dim, rng);
        Classifier clf = Classifier::random(dim, classes, rng);
        const auto labels = random_labels(n, classes, rng);

        const WceResult r = wce_loss(clf, features, std::vector<double>(n, 1.0), labels);
        const double want = oracles::plain_cross_entropy(class_logits(clf, features), labels);
        CHECK(std::abs(r.loss - want) < 1e-12);
    }
}

TEST_CASE("wce: two classes with equal logits cost ln 2 per sample") {
    const std::size_t n = 4, dim = 3;
    Rng rng(6);
    const Tensor2D features = random_tensor(n, dim, rng);
    Classifier clf;
    clf.weights = Tensor2D(dim, 2);
    for (std::size_t d = 0; d < dim; ++d)
        clf.weights(d, 0) = clf.weights(d, 1) = rng.uniform(-1.0, 1.0);
    const auto alphas = random_alphas(n, rng);
    const WceResult r = wce_loss(clf, features, alphas, {0, 1, 0, 1});
    CHECK(std::abs(r.loss - std::log(2.0)) < 1e-12);
}

TEST_CASE("wce: gradients match finite differences on a 5-sample batch") {
    Rng rng(7);
    const std::size_t n = 5, dim = 4;
    const int classes = 3;
    const Tensor2D features = random_tensor(n, dim, rng);
    const Classifier clf = Classifier::random(dim, classes, rng);
    const auto alphas = random_alphas(n, rng);
    const auto labels = random_labels(n, classes, rng);
    const WceResult base = wce_loss(clf, features, alphas, labels);

    SUBCASE("w.r.t. classifier") {
        const auto numeric = finite_diff_grad(
            [&](const std::vector<double>& w) {
                Classifier probe;
                probe.weights = Tensor2D(dim, classes);
                probe.weights.data() = w;
                return wce_loss(probe, features, alphas, labels).loss;
            },
            clf.weights.data(), 1e-6);
        CHECK(max_rel_error(base.grad_classifier.data(), numeric) < 1e-5);
    }
    SUBCASE("w.r.t. features") {
        const auto numeric = finite_diff_grad(
            [&](const std::vector<double>& x) {
                Tensor2D probe(n, dim);
                probe.data() = x;
                return wce_loss(clf, probe, alphas, labels).loss;
            },
            features.data(), 1e-6);
        CHECK(max_rel_error(base.grad_features.data(), numeric) < 1e-5);
    }
    SUBCASE("w.r.t. importance weights") {
        const auto numeric = finite_diff_grad(
            [&](const std::vector<double>& a) { return wce_loss(clf, features, a, labels).loss; },
            alphas, 1e-6);
        CHECK(max_rel_error(base.grad_alphas, numeric) < 1e-5);
    }
}

TEST_CASE("wce: loss is invariant under row-constant shifts of the scaled logits") {
    // A constant-one feature column plus a uniform classifier row shift adds
    // the same constant to every class logit of each sample; after alpha
    // scaling the shift stays row-constant, so the softmax cannot see it.
    Rng rng(8);
    const std::size_t n = 6, dim = 4;
    const int classes = 5;
    Tensor2D features = random_tensor(n, dim, rng);
    for (std::size_t i = 0; i < n; ++i) features(i, dim - 1) = 1.0;
    const Classifier clf = Classifier::random(dim, classes, rng);
    const auto alphas = random_alphas(n, rng);
    const auto labels = random_labels(n, classes, rng);

    Classifier shifted = clf;
    for (int j = 0; j < classes; ++j) shifted.weights(dim - 1, static_cast<std::size_t>(j)) += 7.5;

    const WceResult a = wce_loss(clf, features, alphas, labels);
    const WceResult b = wce_loss(shifted, features, alphas, labels);
    CHECK(std::abs(a.loss - b.loss) < 1e-12);
    for (std::size_t i = 0; i < a.probabilities.size(); ++i)
        CHECK(std::abs(a.probabilities.data()[i] - b.probabilities.data()[i]) < 1e-12);
}

TEST_CASE("wce: probability rows sum to one") {
    Rng rng(9);
    const Tensor2D features = random_tensor(7, 3, rng);
    const Classifier clf = Classifier::random(3, 4, rng);
    const WceResult r = wce_loss(clf, features, random_alphas(7, rng), random_labels(7, 4, rng));
    for (std::size_t i = 0; i < 7; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < 4; ++j) sum += r.probabilities(i, j);
        CHECK(std::abs(sum - 1.0) < 1e-9);
    }
}

TEST_CASE("wce: domain and numeric guards") {
    Rng rng(10);
    const Tensor2D features = random_tensor(3, 2, rng);
    const Classifier clf = Classifier::random(2, 3, rng);
    const auto alphas = random_alphas(3, rng);
    CHECK_THROWS_AS(wce_loss(clf, features, alphas, {0, 1, 3}), DomainError);
    CHECK_THROWS_AS(wce_loss(clf, features, alphas, {0, 1, -1}), DomainError);
    CHECK_THROWS_AS(wce_loss(clf, features, {0.5, -0.1, 0.5}, {0, 1, 2}), DomainError);
    Tensor2D bad = features;
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(wce_loss(clf, bad, alphas, {0, 1, 2}), NumericError);
}

// ---------------------------------------------------------------------------
// Rank split
// ---------------------------------------------------------------------------

TEST_CASE("rank_split: sorts descending and splits at round(beta N)") {
    const RankSplit s = rank_split({0.9, 0.1, 0.5, 0.7}, 0.5);
    CHECK(s.high_count == 2);
    CHECK(s.order == std::vector<std::size_t>{0, 3, 2, 1});
    CHECK(s.high == std::vector<std::size_t>{0, 3});
    CHECK(s.low == std::vector<std::size_t>{2, 1});
}

TEST_CASE("rank_split: beta 0.7 with ten samples keeps seven high") {
    std::vector<double> alphas(10);
    Rng rng(11);
    for (double& a : alphas) a = rng.uniform(0.0, 1.0);
    CHECK(rank_split(alphas, 0.7).high_count == 7);
}

TEST_CASE("rank_split: equal weights fall back to original order (stable ties)") {
    const RankSplit s = rank_split(std::vector<double>(5, 0.4), 0.6);
    CHECK(s.high_count == 3);
    CHECK(s.high == std::vector<std::size_t>{0, 1, 2});
    CHECK(s.low == std::vector<std::size_t>{3, 4});
}

TEST_CASE("rank_split: high count is clamped so both groups are non-empty") {
    CHECK(rank_split({0.1, 0.9}, 0.9).high_count == 1);   // round(1.8) = 2 -> 1
    CHECK(rank_split({0.1, 0.9}, 0.05).high_count == 1);  // round(0.1) = 0 -> 1
}

TEST_CASE("rank_split: guards") {
    CHECK_THROWS_AS(rank_split({0.5}, 0.5), DomainError);
    CHECK_THROWS_AS(rank_split({0.5, 0.6}, 0.0), DomainError);
    CHECK_THROWS_AS(rank_split({0.5, 0.6}, 1.0), DomainError);
}

TEST_CASE("rank_split: partition property over random batches") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(30);
        std::vector<double> alphas(n);
        for (double& a : alphas) a = rng.uniform(0.0, 1.0);
        const double beta = rng.uniform(0.05, 0.95);
        const RankSplit s = rank_split(alphas, beta);

        const double rounded = std::round(beta * static_cast<double>(n));
        const auto want = static_cast<std::size_t>(
            std::clamp(rounded, 1.0, static_cast<double>(n - 1)));
        CHECK(s.high_count == want);
        CHECK(s.high.size() + s.low.size() == n);

        std::vector<char> seen(n, 0);
        for (std::size_t idx : s.high) seen[idx] |= 1;
        for (std::size_t idx : s.low) seen[idx] |= 2;
        for (char c : seen) CHECK((c == 1 || c == 2));
        for (std::size_t k = 0; k + 1 < n; ++k)
            CHECK(alphas[s.order[k]] >= alphas[s.order[k + 1]]);
    }
}

// ---------------------------------------------------------------------------
// Rank-regularization loss
// ---------------------------------------------------------------------------

TEST_CASE("rr: inactive when the group gap meets the margin") {
    const RrResult r = rr_loss({0.8, 0.6}, {0}, {1}, 0.15);
    CHECK(r.loss == 0.0);
    CHECK_FALSE(r.active);
    for (double g : r.grad_alphas) CHECK(g == 0.0);
    CHECK(r.grad_delta1 == 0.0);
}

TEST_CASE("rr: direct formula evaluation") {
    const RrResult r = rr_loss({0.7, 0.65}, {0}, {1}, 0.15);
    CHECK(r.loss == doctest::Approx(0.10).epsilon(1e-12));
    CHECK(r.active);
    CHECK(r.grad_delta1 == 1.0);
}

TEST_CASE("rr: exactly-zero hinge uses the zero subgradient") {
    // 0.75 - 0.5 = 0.25 exactly in binary; margin 0.25 makes the hinge 0.
    const RrResult r = rr_loss({0.75, 0.5}, {0}, {1}, 0.25);
    CHECK(r.loss == 0.0);
    CHECK_FALSE(r.active);
    for (double g : r.grad_alphas) CHECK(g == 0.0);
}

TEST_CASE("rr: active-hinge gradient matches finite differences with frozen groups") {
    Rng rng(13);
    int checked = 0;
    while (checked < 5) {
        const std::size_t n = 4 + rng.below(10);
        std::vector<double> alphas(n);
        for (double& a : alphas) a = rng.uniform(0.2, 0.8);
        const RankSplit s = rank_split(alphas, 0.6);
        const RrResult base = rr_loss(alphas, s.high, s.low, 0.5);  // wide margin: active
        if (!base.active) continue;
        ++checked;
        const auto numeric = finite_diff_grad(
            [&](const std::vector<double>& a) { return rr_loss(a, s.high, s.low, 0.5).loss; },
            alphas, 1e-6);
        CHECK(max_rel_error(base.grad_alphas, numeric) < 1e-6);
    }
}

TEST_CASE("rr: zero exactly when the gap reaches delta1") {
    Rng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng.below(12);
        std::vector<double> alphas(n);
        for (double& a : alphas) a = rng.uniform(0.0, 1.0);
        const RankSplit s = rank_split(alphas, rng.uniform(0.2, 0.8));
        const double delta1 = rng.uniform(0.0, 0.5);
        const RrResult r = rr_loss(alphas, s.high, s.low, delta1);
        CHECK((r.loss == 0.0) == (r.high_mean - r.low_mean >= delta1));
    }
}

TEST_CASE("rr: invariant under permutations within a group") {
    const std::vector<double> alphas{0.9, 0.8, 0.3, 0.2, 0.1};
    const RrResult a = rr_loss(alphas, {0, 1}, {2, 3, 4}, 0.8);
    const RrResult b = rr_loss(alphas, {1, 0}, {4, 2, 3}, 0.8);
    CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-12));
    CHECK(a.high_mean == doctest::Approx(b.high_mean).epsilon(1e-12));
    CHECK(a.low_mean == doctest::Approx(b.low_mean).epsilon(1e-12));
}

TEST_CASE("rr: group validation") {
    const std::vector<double> alphas{0.5, 0.6, 0.7};
    CHECK_THROWS_AS(rr_loss(alphas, {}, {0, 1, 2}, 0.1), DomainError);
    CHECK_THROWS_AS(rr_loss(alphas, {0, 1}, {1, 2}, 0.1), DomainError);   // overlap
    CHECK_THROWS_AS(rr_loss(alphas, {0}, {1}, 0.1), DomainError);         // not covering
    CHECK_THROWS_AS(rr_loss(alphas, {0, 3}, {1, 2}, 0.1), DomainError);   // out of range
    CHECK_THROWS_AS(rr_loss(alphas, {0}, {1, 2}, -0.1), DomainError);
}

// ---------------------------------------------------------------------------
// Total loss
// ---------------------------------------------------------------------------

TEST_CASE("total: endpoints and the 1:1 default") {
    CHECK(total_loss(0.8, 0.1, 0.0) == 0.8);
    CHECK(total_loss(0.8, 0.1, 1.0) == 0.1);
    CHECK(total_loss(0.8, 0.1, 0.5) == doctest::Approx(0.45).epsilon(1e-15));
    CHECK_THROWS_AS(total_loss(0.8, 0.1, -0.01), DomainError);
    CHECK_THROWS_AS(total_loss(0.8, 0.1, 1.01), DomainError);
}

// ---------------------------------------------------------------------------
// Relabeling
// ---------------------------------------------------------------------------

TEST_CASE("relabel: confident disagreement flips the label") {
    const Tensor2D p = Tensor2D::from_rows({{0.9, 0.05, 0.05}});
    const RelabelResult r = relabel(p, {1}, {0}, 0.2);
    REQUIRE(r.events.size() == 1);
    CHECK(r.labels[0] == 0);
    CHECK(r.events[0].index == 0);
    CHECK(r.events[0].old_label == 1);
    CHECK(r.events[0].new_label == 0);
    CHECK(r.events[0].p_max == 0.9);
    CHECK(r.events[0].p_given == 0.05);
}

TEST_CASE("relabel: agreement with the argmax is a fixed point") {
    const Tensor2D p = Tensor2D::from_rows({{0.9, 0.05, 0.05}});
    const RelabelResult r = relabel(p, {0}, {0}, 0.0);
    CHECK(r.events.empty());
    CHECK(r.labels[0] == 0);
}

TEST_CASE("relabel: threshold at or above one disables relabeling") {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.below(8);
        const std::size_t classes = 2 + rng.below(5);
        Tensor2D p(n, classes);
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < classes; ++j) {
                p(i, j) = rng.uniform(0.01, 1.0);
                sum += p(i, j);
            }
            for (std::size_t j = 0; j < classes; ++j) p(i, j) /= sum;
        }
        std::vector<int> labels(n);
        for (int& y : labels) y = static_cast<int>(rng.below(classes));
        std::vector<std::size_t> low(n);
        std::iota(low.begin(), low.end(), std::size_t{0});
        const RelabelResult r = relabel(p, labels, low, 1.0);
        CHECK(r.events.empty());
        CHECK(r.labels == labels);
    }
}

TEST_CASE("relabel: high-group samples are never touched") {
    const Tensor2D p = Tensor2D::from_rows({{0.9, 0.1}, {0.9, 0.1}, {0.9, 0.1}});
    const RelabelResult r = relabel(p, {1, 1, 1}, {2}, 0.2);
    CHECK(r.labels[0] == 1);  // not in the low group
    CHECK(r.labels[1] == 1);
    CHECK(r.labels[2] == 0);
}

TEST_CASE("relabel: idempotent for fixed probabilities") {
    Rng rng(16);
    const std::size_t n = 10, classes = 4;
    Tensor2D p(n, classes);
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < classes; ++j) {
            p(i, j) = rng.uniform(0.01, 1.0);
            sum += p(i, j);
        }
        for (std::size_t j = 0; j < classes; ++j) p(i, j) /= sum;
    }
    std::vector<int> labels(n);
    for (int& y : labels) y = static_cast<int>(rng.below(classes));
    const std::vector<std::size_t> low{1, 3, 5, 7, 9};

    const RelabelResult once = relabel(p, labels, low, 0.1);
    const RelabelResult twice = relabel(p, once.labels, low, 0.1);
    CHECK(twice.labels == once.labels);
    CHECK(twice.events.empty());
}

TEST_CASE("relabel: argmax ties resolve to the lowest class index") {
    const Tensor2D p = Tensor2D::from_rows({{0.4, 0.4, 0.2}});
    const RelabelResult r = relabel(p, {2}, {0}, 0.1);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].new_label == 0);
}

TEST_CASE("relabel: guards") {
    const Tensor2D p = Tensor2D::from_rows({{0.5, 0.5}});
    CHECK_THROWS_AS(relabel(p, {0}, {1}, 0.1), DomainError);   // index outside batch
    CHECK_THROWS_AS(relabel(p, {0}, {0}, -0.1), DomainError);  // negative threshold
    const Tensor2D bad = Tensor2D::from_rows({{0.5, 0.6}});    // row does not sum to 1
    CHECK_THROWS_AS(relabel(bad, {0}, {0}, 0.1), DomainError);
}

// ---------------------------------------------------------------------------
// The full gradient-check suite (the CLI and acceptance both run this).
// ---------------------------------------------------------------------------

TEST_CASE("gradcheck: every component passes at the default tolerance") {
    const GradCheckReport report = run_gradcheck(123, 5);
    CHECK(report.passed);
    CHECK(report.entries.size() == 7);
    for (const auto& e : report.entries) {
        CAPTURE(e.component);
        CHECK(e.passed);
        CHECK(e.max_rel_error < 1e-4);
    }
}

TEST_CASE("gradcheck: an injected fault is caught and named") {
    const GradCheckReport report = run_gradcheck(123, 3, 1e-4, 1e-6, "rr-loss/alpha");
    CHECK_FALSE(report.passed);
    for (const auto& e : report.entries) {
        if (e.component == "rr-loss/alpha")
            CHECK_FALSE(e.passed);
        else
            CHECK(e.passed);
    }
    CHECK_THROWS_AS(run_gradcheck(123, 3, 1e-4, 1e-6, "no-such-component"), DomainError);
}

TEST_CASE("gradcheck: identical seeds give identical error values") {
    const GradCheckReport a = run_gradcheck(77, 3);
    const GradCheckReport b = run_gradcheck(77, 3);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        CHECK(a.entries[i].max_rel_error == b.entries[i].max_rel_error);
}
