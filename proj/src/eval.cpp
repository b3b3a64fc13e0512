#include "rxai/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rxai/common.hpp"

namespace rxai {

ConfusionMatrix confusion(const std::vector<int>& predicted,
                          const std::vector<int>& actual) {
    if (predicted.size() != actual.size())
        throw DataError("predicted/actual length mismatch");
    if (predicted.empty()) throw DataError("confusion matrix needs at least one sample");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if ((predicted[i] != 0 && predicted[i] != 1) || (actual[i] != 0 && actual[i] != 1))
            throw DataError("labels must be 0 or 1");
        if (actual[i] == 1)
            (predicted[i] == 1 ? cm.tp : cm.fn)++;
        else
            (predicted[i] == 1 ? cm.fp : cm.tn)++;
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    if (cm.total() <= 0) throw DataError("empty confusion matrix");
    Metrics m;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    if (cm.tp + cm.fp > 0) {
        m.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    } else {
        m.precision_undefined = true;
    }
    if (cm.tp + cm.fn > 0) {
        m.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    } else {
        m.recall_undefined = true;
    }
    if (m.precision + m.recall > 0.0 && !m.precision_undefined && !m.recall_undefined) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.f1_undefined = true;
    }
    return m;
}

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& actual) {
    if (scores.size() != actual.size())
        throw DataError("scores/actual length mismatch");
    long n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (!std::isfinite(scores[i])) throw NumericError("non-finite score");
        if (actual[i] == 1)
            ++n_pos;
        else if (actual[i] == 0)
            ++n_neg;
        else
            throw DataError("labels must be 0 or 1");
    }
    if (n_pos == 0 || n_neg == 0)
        throw DataError("ROC needs both classes present");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    long tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        double threshold = scores[order[i]];
        while (i < order.size() && scores[order[i]] == threshold) {
            (actual[order[i]] == 1 ? tp : fp)++;
            ++i;
        }
        curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(n_neg),
                                  static_cast<double>(tp) / static_cast<double>(n_pos));
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
        auto [x0, y0] = curve.points[k - 1];
        auto [x1, y1] = curve.points[k];
        auc += (x1 - x0) * 0.5 * (y0 + y1);
    }
    curve.auc = auc;
    return curve;
}

}  // namespace rxai
