#include "rxai/serialize.hpp"

#include <fstream>
#include <sstream>

#include "rxai/common.hpp"

namespace rxai {

using nlohmann::json;

json to_json(const ImputationModel& model) {
    return json{{"numeric_fill", model.numeric_fill},
                {"categorical_fill", model.categorical_fill}};
}

ImputationModel imputer_from_json(const json& j) {
    ImputationModel model;
    model.numeric_fill = j.at("numeric_fill").get<std::map<std::string, double>>();
    model.categorical_fill =
        j.at("categorical_fill").get<std::map<std::string, std::string>>();
    return model;
}

json to_json(const BinningModel& model) {
    json cols = json::array();
    for (const auto& c : model.columns)
        cols.push_back({{"name", c.column},
                        {"edges", c.edges},
                        {"n_bins_effective", c.n_bins_effective}});
    return json{{"n_bins_requested", model.n_bins_requested}, {"columns", cols}};
}

BinningModel binner_from_json(const json& j) {
    BinningModel model;
    model.n_bins_requested = j.at("n_bins_requested").get<int>();
    for (const auto& c : j.at("columns")) {
        ColumnBins bins;
        bins.column = c.at("name").get<std::string>();
        bins.edges = c.at("edges").get<std::vector<double>>();
        bins.n_bins_effective = c.at("n_bins_effective").get<int>();
        model.columns.push_back(std::move(bins));
    }
    return model;
}

json to_json(const TokenVocab& vocab) {
    return json{{"tokens", vocab.id_to_token}};
}

TokenVocab vocab_from_json(const json& j) {
    TokenVocab vocab;
    vocab.id_to_token = j.at("tokens").get<std::vector<std::string>>();
    if (vocab.id_to_token.size() < 3 || vocab.id_to_token[0] != "[PAD]" ||
        vocab.id_to_token[1] != "[UNK]" || vocab.id_to_token[2] != "[CLS]")
        throw DataError("vocab file does not start with the special tokens");
    for (int i = 0; i < vocab.size(); ++i) vocab.token_to_id[vocab.id_to_token[i]] = i;
    return vocab;
}

json to_json(const TransformReport& report) {
    json records = json::array();
    for (const auto& r : report.records)
        records.push_back({{"column", r.column},
                           {"skew_before", r.skew_before},
                           {"method", r.method == PowerMethod::box_cox ? "box_cox" : "yeo_johnson"},
                           {"lambda", r.lambda},
                           {"skew_after", r.skew_after},
                           {"flagged", r.flagged}});
    return json{{"records", records}};
}

json to_json(const ConfusionMatrix& cm) {
    return json{{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

json to_json(const Metrics& m) {
    return json{{"accuracy", m.accuracy},
                {"precision", m.precision},
                {"recall", m.recall},
                {"f1", m.f1},
                {"precision_undefined", m.precision_undefined},
                {"recall_undefined", m.recall_undefined},
                {"f1_undefined", m.f1_undefined}};
}

json to_json(const RocCurve& curve) {
    json points = json::array();
    for (const auto& [fpr, tpr] : curve.points) points.push_back({fpr, tpr});
    return json{{"points", points}, {"auc", curve.auc}};
}

json to_json(const Explanation& explanation) {
    json tokens = json::array();
    for (const auto& [token, weight] : explanation.tokens)
        tokens.push_back({{"token", token}, {"weight", weight}});
    json j{{"method", to_string(explanation.method)},
           {"tokens", tokens},
           {"predicted_class", explanation.predicted_class},
           {"class_probs", explanation.class_probs},
           {"sign_convention", kSignConvention}};
    if (explanation.method == ExplainMethod::lime) {
        j["local_fidelity_r2"] = explanation.local_fidelity_r2;
        j["n_samples"] = explanation.n_samples;
        j["seed"] = explanation.seed;
    }
    return j;
}

json to_json(const ImportanceSummary& summary) {
    auto class_json = [](const ClassImportance& ci) {
        json features = json::array();
        for (const auto& [token, weight] : ci.top_features)
            features.push_back({{"token", token}, {"mean_signed_weight", weight}});
        return json{{"avg_abs_importance", ci.avg_abs_importance},
                    {"top_features", features}};
    };
    json j;
    j["sign_convention"] = kSignConvention;
    j["benign"] = class_json(summary.per_class[0]);
    j["ransomware"] = class_json(summary.per_class[1]);
    return j;
}

json to_json(const TrainHistory& history) {
    return json{{"step_loss", history.step_loss},
                {"val_accuracy", history.val_accuracy},
                {"val_f1", history.val_f1}};
}

json to_json(const EmbeddingStats& stats) {
    return json{{"mean_pairwise_cosine", stats.mean_pairwise_cosine},
                {"per_dimension_variance", stats.per_dimension_variance},
                {"top_singular_share", stats.top_singular_share}};
}

json to_json(const SplitIndices& split) {
    return json{{"train", split.train},
                {"validation", split.validation},
                {"test", split.test},
                {"seed", split.seed}};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_json_file(const std::string& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

json read_json_file(const std::string& path) {
    return json::parse(read_text_file(path));
}

}  // namespace rxai
