#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace rxai {

// Black-box classifier over a token sentence; returns (P(Benign),
// P(Ransomware)). Must be pure: explainers may evaluate it concurrently.
using PredictFn = std::function<std::array<double, 2>(const std::string&)>;

enum class ExplainMethod { lime, occlusion };

std::string to_string(ExplainMethod method);

// Per-position signed weights for one prediction. Positive pushes toward
// Ransomware (class 1).
struct Explanation {
    ExplainMethod method = ExplainMethod::occlusion;
    std::vector<std::pair<std::string, double>> tokens;  // input position order
    int predicted_class = 0;
    std::array<double, 2> class_probs{0.5, 0.5};
    double local_fidelity_r2 = 0.0;  // lime only
    int n_samples = 0;               // lime only
    std::uint64_t seed = 0;          // lime only
};

struct LimeOptions {
    int n_samples = 1000;
    double kernel_width = 25.0;  // on the 0-100 mask distance
    std::uint64_t seed = 0;
};

// Local ridge surrogate over the {0,1}^d token-presence space. Each sample
// deactivates k ~ Uniform{1..d} positions (removed from the string) and is
// weighted exp(-D^2 / kernel_width^2) with D = 100 * (1 - kept/d). The
// surrogate is a weighted ridge regression (L2 strength 1, unpenalized
// intercept) of P(Ransomware) on the mask; per-sample draws derive from
// (seed, sample index) so parallel and serial runs match.
Explanation lime_explain(const PredictFn& predict, const std::string& text,
                         const LimeOptions& options = {});

// weight_i = P1(full text) - P1(text without token i); exactly d+1 predict
// calls.
Explanation occlusion_explain(const PredictFn& predict, const std::string& text);

struct ClassImportance {
    double avg_abs_importance = 0.0;
    // (token, mean signed weight) sorted by |weight| descending.
    std::vector<std::pair<std::string, double>> top_features;
};

struct ImportanceSummary {
    ClassImportance per_class[2];  // indexed by label: 0 Benign, 1 Ransomware
};

// Aggregates per class: avg_abs_importance is the mean over explanations of
// the mean |weight|; token weights merge by token string across positions and
// explanations (absent tokens contribute nothing).
ImportanceSummary summarize_importance(const std::vector<Explanation>& explanations,
                                       const std::vector<int>& labels);

}  // namespace rxai
