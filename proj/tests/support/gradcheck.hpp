#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rxai/model.hpp"

namespace rxai::testing {

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::string worst_tensor;
};

// Central finite differences against the analytic gradients, every element of
// every live tensor. Relative error uses a unit floor in the denominator so
// near-zero gradients are compared absolutely instead of dividing by noise; a
// wrong gradient still shows up as an O(1) error.
inline GradCheckResult gradient_check(TransformerClassifier model,
                                      const std::vector<EncodedExample>& batch,
                                      double eps = 1e-4) {
    const LossGrad analytic = loss_and_grad(model, batch);
    auto params = model.tensors();
    auto grads = analytic.grads.tensors();

    GradCheckResult result;
    for (std::size_t t = 0; t < params.size(); ++t) {
        Eigen::MatrixXd& tensor = *params[t].second;
        const Eigen::MatrixXd& grad = *grads[t].second;
        for (Eigen::Index r = 0; r < tensor.rows(); ++r) {
            for (Eigen::Index c = 0; c < tensor.cols(); ++c) {
                const double saved = tensor(r, c);
                tensor(r, c) = saved + eps;
                const double up = loss_and_grad(model, batch).loss;
                tensor(r, c) = saved - eps;
                const double down = loss_and_grad(model, batch).loss;
                tensor(r, c) = saved;

                const double fd = (up - down) / (2.0 * eps);
                const double a = grad(r, c);
                const double rel =
                    std::abs(a - fd) / std::max({std::abs(a), std::abs(fd), 1.0});
                if (rel > result.max_rel_error) {
                    result.max_rel_error = rel;
                    result.worst_tensor = params[t].first;
                }
            }
        }
    }
    return result;
}

}  // namespace rxai::testing
