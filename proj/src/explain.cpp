#include "rxai/explain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "rxai/common.hpp"
#include "rxai/nttp.hpp"

namespace rxai {

namespace {

std::array<double, 2> checked_predict(const PredictFn& predict, const std::string& text) {
    std::array<double, 2> p = predict(text);
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
        throw NumericError("predict function returned a non-finite probability");
    return p;
}

std::string join_active(const std::vector<std::string>& tokens,
                        const std::vector<std::uint8_t>& active) {
    std::string text;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!active[i]) continue;
        if (!text.empty()) text += ' ';
        text += tokens[i];
    }
    return text;
}

}  // namespace

std::string to_string(ExplainMethod method) {
    return method == ExplainMethod::lime ? "lime" : "occlusion";
}

Explanation lime_explain(const PredictFn& predict, const std::string& text,
                         const LimeOptions& options) {
    const std::vector<std::string> tokens = split_tokens(text);
    const std::size_t d = tokens.size();
    if (d == 0) throw DataError("cannot explain an empty text");
    if (options.n_samples < 1) throw ConfigError("lime needs at least one sample");

    Explanation explanation;
    explanation.method = ExplainMethod::lime;
    explanation.n_samples = options.n_samples;
    explanation.seed = options.seed;
    explanation.class_probs = checked_predict(predict, text);
    explanation.predicted_class =
        explanation.class_probs[1] > explanation.class_probs[0] ? 1 : 0;

    const int n = options.n_samples;
    Eigen::MatrixXd masks(n, static_cast<Eigen::Index>(d));
    Eigen::VectorXd targets(n);
    Eigen::VectorXd weights(n);

    std::vector<int> positions(d);
    for (std::size_t s = 0; s < static_cast<std::size_t>(n); ++s) {
        Rng rng(mix_seed(options.seed, s));
        std::size_t k = 1 + rng.below(d);  // positions to deactivate
        for (std::size_t i = 0; i < d; ++i) positions[i] = static_cast<int>(i);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + rng.below(d - i);
            std::swap(positions[i], positions[j]);
        }
        std::vector<std::uint8_t> active(d, 1);
        for (std::size_t i = 0; i < k; ++i) active[positions[i]] = 0;

        for (std::size_t i = 0; i < d; ++i)
            masks(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) = active[i];
        targets(static_cast<Eigen::Index>(s)) =
            checked_predict(predict, join_active(tokens, active))[1];

        double distance = 100.0 * static_cast<double>(k) / static_cast<double>(d);
        weights(static_cast<Eigen::Index>(s)) =
            std::exp(-distance * distance / (options.kernel_width * options.kernel_width));
    }

    // Weighted ridge with an unpenalized intercept in the last coordinate.
    const Eigen::Index dim = static_cast<Eigen::Index>(d);
    Eigen::MatrixXd design(n, dim + 1);
    design.leftCols(dim) = masks;
    design.col(dim).setOnes();
    Eigen::MatrixXd weighted = weights.asDiagonal() * design;
    Eigen::MatrixXd normal = design.transpose() * weighted;
    constexpr double kRidge = 1.0;
    normal.topLeftCorner(dim, dim).diagonal().array() += kRidge;
    Eigen::VectorXd rhs = design.transpose() * (weights.asDiagonal() * targets);
    Eigen::VectorXd beta = normal.ldlt().solve(rhs);

    explanation.tokens.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
        explanation.tokens.emplace_back(tokens[i], beta(static_cast<Eigen::Index>(i)));

    // Weighted R^2 of the surrogate; 0 when the targets carry no variance.
    Eigen::VectorXd fitted = design * beta;
    double w_sum = weights.sum();
    double y_mean = weights.dot(targets) / w_sum;
    double ss_tot = (weights.array() * (targets.array() - y_mean).square()).sum();
    double ss_res = (weights.array() * (targets - fitted).array().square()).sum();
    explanation.local_fidelity_r2 = ss_tot > 1e-300 ? 1.0 - ss_res / ss_tot : 0.0;
    return explanation;
}

Explanation occlusion_explain(const PredictFn& predict, const std::string& text) {
    const std::vector<std::string> tokens = split_tokens(text);
    const std::size_t d = tokens.size();
    if (d == 0) throw DataError("cannot explain an empty text");

    Explanation explanation;
    explanation.method = ExplainMethod::occlusion;
    explanation.class_probs = checked_predict(predict, text);
    explanation.predicted_class =
        explanation.class_probs[1] > explanation.class_probs[0] ? 1 : 0;

    const double p_full = explanation.class_probs[1];
    explanation.tokens.reserve(d);
    std::vector<std::uint8_t> active(d, 1);
    for (std::size_t i = 0; i < d; ++i) {
        active[i] = 0;
        double p_without = checked_predict(predict, join_active(tokens, active))[1];
        active[i] = 1;
        explanation.tokens.emplace_back(tokens[i], p_full - p_without);
    }
    return explanation;
}

ImportanceSummary summarize_importance(const std::vector<Explanation>& explanations,
                                       const std::vector<int>& labels) {
    if (explanations.size() != labels.size())
        throw DataError("explanations/labels length mismatch");
    if (explanations.empty()) throw DataError("nothing to summarize");

    ImportanceSummary summary;
    for (int cls = 0; cls < 2; ++cls) {
        double abs_sum = 0.0;
        long count = 0;
        std::map<std::string, std::pair<double, long>> by_token;  // sum, occurrences
        for (std::size_t i = 0; i < explanations.size(); ++i) {
            if (labels[i] != cls) continue;
            const Explanation& ex = explanations[i];
            if (ex.tokens.empty()) continue;
            double mean_abs = 0.0;
            for (const auto& [token, weight] : ex.tokens) {
                mean_abs += std::abs(weight);
                auto& acc = by_token[token];
                acc.first += weight;
                acc.second += 1;
            }
            abs_sum += mean_abs / static_cast<double>(ex.tokens.size());
            ++count;
        }
        if (count == 0)
            throw DataError("no explanations for class " + std::to_string(cls));

        ClassImportance& ci = summary.per_class[cls];
        ci.avg_abs_importance = abs_sum / static_cast<double>(count);
        for (const auto& [token, acc] : by_token)
            ci.top_features.emplace_back(token, acc.first / static_cast<double>(acc.second));
        std::sort(ci.top_features.begin(), ci.top_features.end(),
                  [](const auto& a, const auto& b) {
                      double ma = std::abs(a.second), mb = std::abs(b.second);
                      if (ma != mb) return ma > mb;
                      return a.first < b.first;
                  });
    }
    return summary;
}

}  // namespace rxai
