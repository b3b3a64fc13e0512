#include "rxai/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rxai/common.hpp"

namespace rxai {

namespace {

constexpr double kPlotSize = 400.0;
constexpr double kMargin = 50.0;

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string svg_open(double width, double height) {
    std::ostringstream s;
    s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
      << "\">\n";
    return s.str();
}

}  // namespace

std::string svg_roc(const RocCurve& curve) {
    const double w = kPlotSize + 2 * kMargin;
    auto px = [](double fpr) { return kMargin + fpr * kPlotSize; };
    auto py = [](double tpr) { return kMargin + (1.0 - tpr) * kPlotSize; };

    std::ostringstream s;
    s << svg_open(w, w);
    s << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kPlotSize
      << "\" height=\"" << kPlotSize << "\" fill=\"white\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(0) << "\" x2=\"" << px(1)
      << "\" y2=\"" << py(1) << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
    s << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        if (i) s << ' ';
        s << format_double(px(curve.points[i].first)) << ','
          << format_double(py(curve.points[i].second));
    }
    s << "\"/>\n";
    s << "<text x=\"" << kMargin + kPlotSize / 2 << "\" y=\"" << kMargin + kPlotSize + 35
      << "\" text-anchor=\"middle\">false positive rate</text>\n";
    s << "<text x=\"15\" y=\"" << kMargin + kPlotSize / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << kMargin + kPlotSize / 2
      << ")\">true positive rate</text>\n";
    s << "<text x=\"" << kMargin + kPlotSize / 2 << "\" y=\"30\" text-anchor=\"middle\">"
      << "ROC curve (AUC = " << format_double(curve.auc) << ")</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string svg_importance_bars(
    const std::vector<std::pair<std::string, double>>& features,
    const std::string& title) {
    const double row_h = 24.0;
    const double label_w = 180.0;
    const double bar_area = 360.0;
    const double width = label_w + bar_area + 2 * kMargin;
    const double height = 60.0 + row_h * static_cast<double>(features.size());

    double max_abs = 1e-12;
    for (const auto& [token, weight] : features)
        max_abs = std::max(max_abs, std::abs(weight));

    const double mid_x = kMargin + label_w + bar_area / 2.0;
    std::ostringstream s;
    s << svg_open(width, height);
    s << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\">"
      << escape_xml(title) << "</text>\n";
    s << "<line x1=\"" << mid_x << "\" y1=\"40\" x2=\"" << mid_x << "\" y2=\""
      << height - 15 << "\" stroke=\"black\"/>\n";
    double y = 45.0;
    for (const auto& [token, weight] : features) {
        double len = std::abs(weight) / max_abs * (bar_area / 2.0 - 4.0);
        double x = weight >= 0 ? mid_x : mid_x - len;
        const char* fill = weight >= 0 ? "firebrick" : "seagreen";
        s << "<rect x=\"" << format_double(x) << "\" y=\"" << format_double(y)
          << "\" width=\"" << format_double(std::max(len, 0.5)) << "\" height=\""
          << row_h - 8 << "\" fill=\"" << fill << "\"/>\n";
        s << "<text x=\"" << kMargin + label_w - 8 << "\" y=\""
          << format_double(y + row_h - 12) << "\" text-anchor=\"end\" font-size=\"12\">"
          << escape_xml(token) << "</text>\n";
        s << "<text x=\"" << format_double(weight >= 0 ? x + len + 6 : x - 6) << "\" y=\""
          << format_double(y + row_h - 12) << "\" text-anchor=\""
          << (weight >= 0 ? "start" : "end") << "\" font-size=\"11\">"
          << format_double(weight) << "</text>\n";
        y += row_h;
    }
    s << "<text x=\"" << width - kMargin << "\" y=\"" << height - 4
      << "\" text-anchor=\"end\" font-size=\"11\">right = toward Ransomware</text>\n";
    s << "</svg>\n";
    return s.str();
}

std::string svg_attention_heatmap(const Eigen::MatrixXd& attention,
                                  const std::vector<std::string>& tokens,
                                  const std::string& title) {
    const Eigen::Index n = attention.rows();
    const double cell = std::min(28.0, 420.0 / static_cast<double>(std::max<Eigen::Index>(n, 1)));
    const double label_w = 130.0;
    const double width = label_w + cell * static_cast<double>(n) + kMargin;
    const double height = 60.0 + cell * static_cast<double>(n) + label_w;

    double max_v = attention.size() ? attention.maxCoeff() : 1.0;
    if (max_v <= 0) max_v = 1.0;

    std::ostringstream s;
    s << svg_open(width, height);
    s << "<text x=\"" << width / 2 << "\" y=\"25\" text-anchor=\"middle\">"
      << escape_xml(title) << "</text>\n";
    const double x0 = label_w, y0 = 45.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < attention.cols(); ++j) {
            int shade = 255 - static_cast<int>(std::lround(attention(i, j) / max_v * 255.0));
            s << "<rect x=\"" << format_double(x0 + cell * static_cast<double>(j))
              << "\" y=\"" << format_double(y0 + cell * static_cast<double>(i))
              << "\" width=\"" << format_double(cell) << "\" height=\"" << format_double(cell)
              << "\" fill=\"rgb(" << shade << "," << shade << ",255)\">"
              << "<title>" << format_double(attention(i, j)) << "</title></rect>\n";
        }
        if (i < static_cast<Eigen::Index>(tokens.size()))
            s << "<text x=\"" << label_w - 6 << "\" y=\""
              << format_double(y0 + cell * static_cast<double>(i) + cell * 0.7)
              << "\" text-anchor=\"end\" font-size=\"10\">" << escape_xml(tokens[i])
              << "</text>\n";
    }
    for (Eigen::Index j = 0; j < n && j < static_cast<Eigen::Index>(tokens.size()); ++j) {
        double tx = x0 + cell * static_cast<double>(j) + cell * 0.7;
        double ty = y0 + cell * static_cast<double>(n) + 6;
        s << "<text x=\"" << format_double(tx) << "\" y=\"" << format_double(ty)
          << "\" font-size=\"10\" text-anchor=\"start\" transform=\"rotate(90 "
          << format_double(tx) << " " << format_double(ty) << ")\">" << escape_xml(tokens[j])
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::string roc_csv(const RocCurve& curve) {
    std::string out = "fpr,tpr\n";
    for (const auto& [fpr, tpr] : curve.points)
        out += format_double(fpr) + "," + format_double(tpr) + "\n";
    return out;
}

std::string importance_csv(
    const std::vector<std::pair<std::string, double>>& features) {
    std::string out = "# positive = toward Ransomware (class 1)\ntoken,weight\n";
    for (const auto& [token, weight] : features)
        out += token + "," + format_double(weight) + "\n";
    return out;
}

std::string attention_csv(const Eigen::MatrixXd& attention,
                          const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ',';
        out += tokens[i];
    }
    out += '\n';
    for (Eigen::Index i = 0; i < attention.rows(); ++i) {
        for (Eigen::Index j = 0; j < attention.cols(); ++j) {
            if (j) out += ',';
            out += format_double(attention(i, j));
        }
        out += '\n';
    }
    return out;
}

std::string column_stats_csv(const std::vector<ColumnStats>& stats) {
    std::string out = "column,count,mean,std,min,p1,p25,p50,p75,max,mode\n";
    for (const auto& s : stats) {
        out += s.column + "," + std::to_string(s.count) + "," + format_double(s.mean) +
               "," + format_double(s.stddev) + "," + format_double(s.min) + "," +
               format_double(s.p1) + "," + format_double(s.p25) + "," +
               format_double(s.p50) + "," + format_double(s.p75) + "," +
               format_double(s.max) + "," + format_double(s.mode) + "\n";
    }
    return out;
}

std::string transform_histogram_csv(const Dataset& dataset,
                                    const TransformReport& report) {
    constexpr int kBins = 20;
    std::string out = "column,stage,bin,lo,hi,count\n";
    auto histogram = [&](const std::string& column, const char* stage,
                         const std::vector<double>& values) {
        double lo = *std::min_element(values.begin(), values.end());
        double hi = *std::max_element(values.begin(), values.end());
        double width = (hi - lo) / kBins;
        std::vector<long> counts(kBins, 0);
        for (double v : values) {
            int b = width > 0 ? static_cast<int>((v - lo) / width) : 0;
            counts[std::clamp(b, 0, kBins - 1)]++;
        }
        for (int b = 0; b < kBins; ++b) {
            out += column + "," + stage + "," + std::to_string(b) + "," +
                   format_double(lo + b * width) + "," +
                   format_double(lo + (b + 1) * width) + "," + std::to_string(counts[b]) +
                   "\n";
        }
    };
    for (const auto& rec : report.records) {
        const Column* col = dataset.find(rec.column);
        if (!col || !col->is_numeric()) continue;
        PowerTransform t{rec.column, rec.method, rec.lambda};
        histogram(rec.column, "pre", col->numeric);
        histogram(rec.column, "post", apply_power_transform(t, col->numeric));
    }
    return out;
}

}  // namespace rxai
