#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "rxai/dataset.hpp"
#include "rxai/eval.hpp"
#include "rxai/transforms.hpp"

namespace rxai {

// Minimal SVG renderers. The plots are views over data already written to
// JSON/CSV; nothing here computes new statistics.

// Plot area maps data space [0,1]^2 onto a square with fixed margins; the
// polyline endpoints land on the mapped (0,0) and (1,1).
std::string svg_roc(const RocCurve& curve);

// Signed horizontal bars sorted as given; positive weights extend right.
std::string svg_importance_bars(
    const std::vector<std::pair<std::string, double>>& features,
    const std::string& title);

// One shaded cell per attention entry (L x L for an L-token sample).
std::string svg_attention_heatmap(const Eigen::MatrixXd& attention,
                                  const std::vector<std::string>& tokens,
                                  const std::string& title);

// CSV emission for plotting data.
std::string roc_csv(const RocCurve& curve);
std::string importance_csv(
    const std::vector<std::pair<std::string, double>>& features);
std::string attention_csv(const Eigen::MatrixXd& attention,
                          const std::vector<std::string>& tokens);
std::string column_stats_csv(const std::vector<ColumnStats>& stats);

// Pre/post-transform histogram counts per column (20 equal-width bins each),
// the data behind the before/after distribution figures.
std::string transform_histogram_csv(const Dataset& dataset,
                                    const TransformReport& report);

}  // namespace rxai
