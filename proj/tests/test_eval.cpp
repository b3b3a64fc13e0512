#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rxai/common.hpp"
#include "rxai/eval.hpp"

using namespace rxai;

namespace {

// Brute-force pairwise concordance with ties counted 0.5.
double concordance(const std::vector<double>& scores, const std::vector<int>& actual) {
    double num = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (actual[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (actual[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j])
                num += 1.0;
            else if (scores[i] == scores[j])
                num += 0.5;
        }
    }
    return num / static_cast<double>(pairs);
}

ConfusionMatrix from_counts(long tp, long fp, long fn, long tn) {
    std::vector<int> predicted, actual;
    auto push = [&](long n, int p, int a) {
        for (long i = 0; i < n; ++i) {
            predicted.push_back(p);
            actual.push_back(a);
        }
    };
    push(tp, 1, 1);
    push(fp, 1, 0);
    push(fn, 0, 1);
    push(tn, 0, 0);
    return confusion(predicted, actual);
}

}  // namespace

TEST_CASE("confusion reproduces the reported test-set quadrants") {
    // 250-sample evaluations: 134/8/49/59, 146/37/15/52, 141/42/13/54.
    ConfusionMatrix deberta = from_counts(134, 8, 49, 59);
    CHECK(deberta.tp == 134);
    CHECK(deberta.fp == 8);
    CHECK(deberta.fn == 49);
    CHECK(deberta.tn == 59);
    CHECK(deberta.total() == 250);

    ConfusionMatrix all_correct = from_counts(5, 0, 0, 7);
    CHECK(all_correct.fp == 0);
    CHECK(all_correct.fn == 0);

    CHECK_THROWS_AS(confusion({0, 1}, {0}), DataError);
}

TEST_CASE("metrics: accuracy matches the published figures exactly") {
    Metrics deberta = metrics(from_counts(134, 8, 49, 59));
    CHECK(deberta.accuracy == doctest::Approx(0.772).epsilon(1e-12));
    CHECK(deberta.precision == doctest::Approx(134.0 / 142.0).epsilon(1e-12));
    CHECK(deberta.recall == doctest::Approx(134.0 / 183.0).epsilon(1e-12));

    Metrics roberta = metrics(from_counts(146, 37, 15, 52));
    CHECK(roberta.accuracy == doctest::Approx(0.792).epsilon(1e-12));

    Metrics bert = metrics(from_counts(141, 42, 13, 54));
    CHECK(bert.accuracy == doctest::Approx(0.780).epsilon(1e-12));
}

TEST_CASE("metrics: undefined ratios come back flagged as zero") {
    ConfusionMatrix cm;
    cm.fn = 3;
    cm.tn = 2;
    Metrics m = metrics(cm);
    CHECK(m.precision == 0.0);
    CHECK(m.precision_undefined);
    CHECK(m.recall == 0.0);
    CHECK(!m.recall_undefined);  // tp+fn = 3
    CHECK(m.f1 == 0.0);
    CHECK(m.f1_undefined);

    CHECK_THROWS_AS(metrics(ConfusionMatrix{}), DataError);
}

TEST_CASE("metrics: f1 is the harmonic mean when defined") {
    Metrics m = metrics(from_counts(10, 5, 2, 20));
    double expected = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    CHECK(m.f1 == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("roc_auc: frozen examples") {
    CHECK(roc_auc({0.9, 0.8, 0.2, 0.1}, {1, 1, 0, 0}).auc == doctest::Approx(1.0));
    CHECK(roc_auc({0.4, 0.4, 0.4, 0.4}, {1, 0, 1, 0}).auc == doctest::Approx(0.5));
    // 3 of 4 pairs ordered correctly.
    CHECK(roc_auc({0.1, 0.4, 0.35, 0.8}, {0, 0, 1, 1}).auc == doctest::Approx(0.75));
    CHECK_THROWS_AS(roc_auc({0.1, 0.2}, {1, 1}), DataError);
}

TEST_CASE("roc_auc: curve endpoints and monotonicity") {
    Rng rng(404);
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 200; ++i) {
        scores.push_back(rng.uniform());
        labels.push_back(rng.below(2) ? 1 : 0);
    }
    RocCurve curve = roc_auc(scores, labels);
    CHECK(curve.points.front() == std::pair<double, double>(0.0, 0.0));
    CHECK(curve.points.back() == std::pair<double, double>(1.0, 1.0));
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].first >= curve.points[i - 1].first);
        CHECK(curve.points[i].second >= curve.points[i - 1].second);
    }
}

TEST_CASE("roc_auc equals the concordance oracle on random instances") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(mix_seed(1234, seed));
        std::size_t n = 2 + rng.below(499);
        std::vector<double> scores;
        std::vector<int> labels;
        long pos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            // Coarse grid keeps plenty of exact ties in play.
            scores.push_back(static_cast<double>(rng.below(9)) / 8.0);
            labels.push_back(rng.below(2) ? 1 : 0);
            pos += labels.back();
        }
        if (pos == 0) labels[0] = 1;
        if (pos == static_cast<long>(n)) labels[0] = 0;
        double expected = concordance(scores, labels);
        CHECK(roc_auc(scores, labels).auc == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("roc_auc is invariant under strictly increasing score transforms") {
    Rng rng(77);
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 150; ++i) {
        scores.push_back(rng.uniform());
        labels.push_back(i % 3 == 0 ? 1 : 0);
    }
    RocCurve base = roc_auc(scores, labels);
    std::vector<double> warped(scores.size());
    std::transform(scores.begin(), scores.end(), warped.begin(),
                   [](double s) { return std::exp(3.0 * s) - 0.5; });
    RocCurve mapped = roc_auc(warped, labels);
    CHECK(base.auc == doctest::Approx(mapped.auc).epsilon(1e-15));
    CHECK(base.points == mapped.points);
}

TEST_CASE("metrics are invariant under sample order permutation") {
    std::vector<int> predicted = {1, 0, 1, 1, 0, 0, 1, 0};
    std::vector<int> actual = {1, 0, 0, 1, 1, 0, 1, 1};
    Metrics base = metrics(confusion(predicted, actual));
    std::vector<std::size_t> order = {7, 2, 5, 0, 3, 6, 1, 4};
    std::vector<int> p2, a2;
    for (auto i : order) {
        p2.push_back(predicted[i]);
        a2.push_back(actual[i]);
    }
    Metrics permuted = metrics(confusion(p2, a2));
    CHECK(base.accuracy == permuted.accuracy);
    CHECK(base.precision == permuted.precision);
    CHECK(base.recall == permuted.recall);
    CHECK(base.f1 == permuted.f1);
}
