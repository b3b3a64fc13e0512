#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "rxai/dataset.hpp"
#include "rxai/eval.hpp"
#include "rxai/explain.hpp"
#include "rxai/model.hpp"
#include "rxai/nttp.hpp"
#include "rxai/transforms.hpp"

namespace rxai {

inline constexpr const char* kSignConvention =
    "positive weights push the prediction toward Ransomware (class 1)";

nlohmann::json to_json(const ImputationModel& model);
ImputationModel imputer_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BinningModel& model);
BinningModel binner_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TokenVocab& vocab);
TokenVocab vocab_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TransformReport& report);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const Metrics& m);
nlohmann::json to_json(const RocCurve& curve);

nlohmann::json to_json(const Explanation& explanation);
nlohmann::json to_json(const ImportanceSummary& summary);

nlohmann::json to_json(const TrainHistory& history);
nlohmann::json to_json(const EmbeddingStats& stats);
nlohmann::json to_json(const SplitIndices& split);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace rxai
