#pragma once

#include <utility>
#include <vector>

namespace rxai {

// Positive class is Ransomware (1).
struct ConfusionMatrix {
    long tp = 0, fp = 0, fn = 0, tn = 0;
    long total() const { return tp + fp + fn + tn; }
};

ConfusionMatrix confusion(const std::vector<int>& predicted,
                          const std::vector<int>& actual);

// Ratios with a zero denominator come back as 0 with the matching flag set.
struct Metrics {
    double accuracy = 0, precision = 0, recall = 0, f1 = 0;
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool f1_undefined = false;
};

Metrics metrics(const ConfusionMatrix& cm);

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), starts (0,0)
    double auc = 0.0;
};

// Threshold sweep over unique scores in descending order; tied scores enter
// together, which makes the trapezoidal area equal the pairwise concordance
// probability with ties counted 0.5. Both classes must be present.
RocCurve roc_auc(const std::vector<double>& scores, const std::vector<int>& actual);

}  // namespace rxai
