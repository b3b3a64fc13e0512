#include "rxai/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "rxai/common.hpp"

namespace rxai {

namespace {

constexpr double kLambdaLo = -5.0;
constexpr double kLambdaHi = 5.0;
constexpr double kLambdaTol = 1e-6;
constexpr double kZeroLambda = 1e-10;  // switch to the log branches

void require_finite(const std::vector<double>& values) {
    for (double v : values)
        if (!std::isfinite(v)) throw NumericError("non-finite input value");
}

double box_cox_value(double x, double lambda) {
    if (x <= 0.0)
        throw NumericError("Box-Cox requires positive inputs, got " + format_double(x));
    if (std::abs(lambda) < kZeroLambda) return std::log(x);
    return (std::pow(x, lambda) - 1.0) / lambda;
}

double yeo_johnson_value(double x, double lambda) {
    if (x >= 0.0) {
        if (std::abs(lambda) < kZeroLambda) return std::log1p(x);
        return (std::pow(x + 1.0, lambda) - 1.0) / lambda;
    }
    if (std::abs(lambda - 2.0) < kZeroLambda) return -std::log1p(-x);
    return -(std::pow(1.0 - x, 2.0 - lambda) - 1.0) / (2.0 - lambda);
}

double mle_variance(const std::vector<double>& y) {
    double mean = 0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(y.size());
    double var = 0;
    for (double v : y) var += (v - mean) * (v - mean);
    return var / static_cast<double>(y.size());
}

// Golden-section maximization of f over [lo, hi].
template <typename F>
double golden_max(F f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double skewness(const std::vector<double>& values) {
    if (values.size() < 3)
        throw NumericError("skewness needs at least 3 values");
    require_finite(values);
    const double n = static_cast<double>(values.size());
    double mean = 0;
    for (double v : values) mean += v;
    mean /= n;
    double m2 = 0, m3 = 0;
    for (double v : values) {
        double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 <= 0.0) throw NumericError("skewness undefined for zero-variance data");
    return m3 / std::pow(m2, 1.5);
}

double power_log_likelihood(PowerMethod method, const std::vector<double>& values,
                            double lambda) {
    const double n = static_cast<double>(values.size());
    std::vector<double> y(values.size());
    double jacobian = 0.0;
    if (method == PowerMethod::box_cox) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            y[i] = box_cox_value(values[i], lambda);
            jacobian += std::log(values[i]);
        }
        jacobian *= (lambda - 1.0);
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) {
            y[i] = yeo_johnson_value(values[i], lambda);
            jacobian += std::copysign(1.0, values[i]) * std::log1p(std::abs(values[i]));
        }
        jacobian *= (lambda - 1.0);
    }
    double var = mle_variance(y);
    if (var <= 0.0) var = std::numeric_limits<double>::min();
    return -0.5 * n * std::log(var) + jacobian;
}

PowerTransform fit_power_transform(const std::vector<double>& values,
                                   const std::string& column) {
    if (values.size() < 3)
        throw NumericError("power transform fit needs at least 3 values");
    require_finite(values);
    double mn = *std::min_element(values.begin(), values.end());
    double mx = *std::max_element(values.begin(), values.end());
    if (mn == mx) throw NumericError("power transform fit needs positive variance");

    PowerTransform t;
    t.column = column;
    t.method = mn > 0.0 ? PowerMethod::box_cox : PowerMethod::yeo_johnson;

    auto ll = [&](double lambda) { return power_log_likelihood(t.method, values, lambda); };

    // Coarse scan keeps the golden section inside the right basin.
    double best_lambda = kLambdaLo;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (double lambda = kLambdaLo; lambda <= kLambdaHi + 1e-12; lambda += 0.1) {
        double v = ll(lambda);
        if (v > best_ll) {
            best_ll = v;
            best_lambda = lambda;
        }
    }
    double lo = std::max(kLambdaLo, best_lambda - 0.1);
    double hi = std::min(kLambdaHi, best_lambda + 0.1);
    t.lambda = golden_max(ll, lo, hi, kLambdaTol);
    if (ll(t.lambda) < best_ll) t.lambda = best_lambda;
    return t;
}

double apply_power_transform(const PowerTransform& t, double x) {
    if (!std::isfinite(x)) throw NumericError("non-finite input value");
    return t.method == PowerMethod::box_cox ? box_cox_value(x, t.lambda)
                                            : yeo_johnson_value(x, t.lambda);
}

std::vector<double> apply_power_transform(const PowerTransform& t,
                                          const std::vector<double>& values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = apply_power_transform(t, values[i]);
    return out;
}

MinMaxScaler fit_minmax(const std::vector<double>& values, const std::string& column) {
    if (values.empty()) throw NumericError("min-max fit needs at least one value");
    require_finite(values);
    MinMaxScaler s;
    s.column = column;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    return s;
}

double apply_minmax(const MinMaxScaler& s, double x) {
    if (!std::isfinite(x)) throw NumericError("non-finite input value");
    if (s.max == s.min) return 0.0;
    return (x - s.min) / (s.max - s.min);
}

std::vector<double> apply_minmax(const MinMaxScaler& s, const std::vector<double>& values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = apply_minmax(s, values[i]);
    return out;
}

TransformReport transform_report(const Dataset& dataset) {
    TransformReport report;
    for (const Column* col : dataset.feature_columns()) {
        if (!col->is_numeric()) continue;
        for (std::size_t r = 0; r < dataset.n_rows(); ++r)
            if (col->missing[r])
                throw DataError("transform report needs an imputed dataset; column '" +
                                col->spec.name + "' has missing values");
        const std::vector<double>& values = col->numeric;
        if (values.size() < 3) continue;
        double mn = *std::min_element(values.begin(), values.end());
        double mx = *std::max_element(values.begin(), values.end());
        if (mn == mx) continue;  // nothing to measure or fix

        TransformRecord rec;
        rec.column = col->spec.name;
        rec.skew_before = skewness(values);
        PowerTransform t = fit_power_transform(values, col->spec.name);
        rec.method = t.method;
        rec.lambda = t.lambda;
        std::vector<double> transformed = apply_power_transform(t, values);
        double mn2 = *std::min_element(transformed.begin(), transformed.end());
        double mx2 = *std::max_element(transformed.begin(), transformed.end());
        rec.skew_after = (mn2 == mx2) ? 0.0 : skewness(transformed);
        rec.flagged = std::abs(rec.skew_after) > std::abs(rec.skew_before);
        report.records.push_back(std::move(rec));
    }
    return report;
}

}  // namespace rxai
