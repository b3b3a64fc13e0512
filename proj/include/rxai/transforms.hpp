#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rxai/dataset.hpp"

namespace rxai {

enum class PowerMethod { box_cox, yeo_johnson };

struct PowerTransform {
    std::string column;
    PowerMethod method = PowerMethod::yeo_johnson;
    double lambda = 1.0;
};

struct MinMaxScaler {
    std::string column;
    double min = 0.0;
    double max = 1.0;
};

struct TransformRecord {
    std::string column;
    double skew_before = 0.0;
    PowerMethod method = PowerMethod::yeo_johnson;
    double lambda = 1.0;
    double skew_after = 0.0;
    bool flagged = false;  // set when |skew_after| > |skew_before|
};

struct TransformReport {
    std::vector<TransformRecord> records;
};

// Fisher-Pearson moment coefficient g1 = m3 / m2^(3/2) with central moments
// over n. Requires n >= 3 and positive variance.
double skewness(const std::vector<double>& values);

// Box-Cox when all values are positive, Yeo-Johnson otherwise; lambda chosen
// by maximizing the profile log-likelihood over [-5, 5] (coarse scan plus
// golden-section refinement to 1e-6).
PowerTransform fit_power_transform(const std::vector<double>& values,
                                   const std::string& column = "");

double apply_power_transform(const PowerTransform& t, double x);
std::vector<double> apply_power_transform(const PowerTransform& t,
                                          const std::vector<double>& values);

// Profile log-likelihood of the transform family at the given lambda;
// exposed so fits can be validated against a plain grid search.
double power_log_likelihood(PowerMethod method, const std::vector<double>& values,
                            double lambda);

MinMaxScaler fit_minmax(const std::vector<double>& values,
                        const std::string& column = "");

// y = (x - min) / (max - min); a constant column maps everything to 0.
// Out-of-range inputs extrapolate (no clipping).
double apply_minmax(const MinMaxScaler& s, double x);
std::vector<double> apply_minmax(const MinMaxScaler& s,
                                 const std::vector<double>& values);

// One record per numeric feature column with enough spread to measure
// (constant columns cannot be transformed and are skipped). Requires an
// imputed dataset.
TransformReport transform_report(const Dataset& dataset);

}  // namespace rxai
