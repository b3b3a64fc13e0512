#include "rxai/nttp.hpp"

#include <algorithm>
#include <sstream>

#include "rxai/common.hpp"

namespace rxai {

const ColumnBins* BinningModel::find(const std::string& column) const {
    for (const auto& c : columns)
        if (c.column == column) return &c;
    return nullptr;
}

std::vector<std::string> BinningModel::column_order() const {
    std::vector<std::string> order;
    order.reserve(columns.size());
    for (const auto& c : columns) order.push_back(c.column);
    return order;
}

BinningModel fit_binner(const Dataset& dataset, int n_bins) {
    if (n_bins < 1) throw ConfigError("n_bins must be at least 1");
    BinningModel model;
    model.n_bins_requested = n_bins;
    for (const Column* col : dataset.feature_columns()) {
        if (!col->is_numeric()) continue;
        std::vector<double> values;
        values.reserve(dataset.n_rows());
        for (std::size_t r = 0; r < dataset.n_rows(); ++r)
            if (!col->missing[r]) values.push_back(col->numeric[r]);
        if (values.empty())
            throw DataError("cannot bin empty column '" + col->spec.name + "'");
        std::sort(values.begin(), values.end());

        ColumnBins bins;
        bins.column = col->spec.name;
        const double max_value = values.back();
        for (int k = 1; k < n_bins; ++k) {
            double edge = quantile_sorted(values, static_cast<double>(k) /
                                                      static_cast<double>(n_bins));
            // Bins are right-closed, so an edge at the maximum would leave the
            // top bin without any training value; duplicates collapse.
            if (edge >= max_value) continue;
            if (!bins.edges.empty() && edge <= bins.edges.back()) continue;
            bins.edges.push_back(edge);
        }
        bins.n_bins_effective = static_cast<int>(bins.edges.size()) + 1;
        model.columns.push_back(std::move(bins));
    }
    return model;
}

int bin_value(const BinningModel& model, const std::string& column, double x) {
    const ColumnBins* bins = model.find(column);
    if (!bins) throw DataError("column '" + column + "' was not fitted by the binner");
    // Count of edges strictly below x == index of the right-closed bin.
    auto it = std::lower_bound(bins->edges.begin(), bins->edges.end(), x);
    return static_cast<int>(it - bins->edges.begin());
}

std::string encode_row(const BinningModel& model,
                       const std::map<std::string, double>& row,
                       const std::vector<std::string>& column_order) {
    const std::vector<std::string> order =
        column_order.empty() ? model.column_order() : column_order;
    std::string text;
    for (const auto& column : order) {
        auto it = row.find(column);
        if (it == row.end())
            throw DataError("row is missing fitted column '" + column + "'");
        int k = bin_value(model, column, it->second);
        if (!text.empty()) text += ' ';
        text += column + "_bin_" + std::to_string(k);
    }
    return text;
}

int TokenVocab::id(const std::string& token) const {
    auto it = token_to_id.find(token);
    return it == token_to_id.end() ? kUnk : it->second;
}

std::string TokenVocab::content_hash() const {
    std::string joined;
    for (const auto& t : id_to_token) {
        joined += t;
        joined += '\n';
    }
    return to_hex(fnv1a64(joined));
}

TokenVocab build_vocab(const std::vector<std::string>& texts) {
    TokenVocab vocab;
    vocab.id_to_token = {"[PAD]", "[UNK]", "[CLS]"};
    for (int i = 0; i < 3; ++i) vocab.token_to_id[vocab.id_to_token[i]] = i;
    for (const auto& text : texts) {
        for (const auto& token : split_tokens(text)) {
            if (vocab.token_to_id.emplace(token, vocab.size()).second)
                vocab.id_to_token.push_back(token);
        }
    }
    return vocab;
}

EncodedExample tokenize(const TokenVocab& vocab, const std::string& text, int max_len) {
    if (max_len < 1) throw ConfigError("max_len must be at least 1");
    EncodedExample ex;
    ex.token_ids.assign(max_len, TokenVocab::kPad);
    ex.attention_mask.assign(max_len, 0);
    ex.token_ids[0] = TokenVocab::kCls;
    ex.attention_mask[0] = 1;
    int pos = 1;
    for (const auto& token : split_tokens(text)) {
        if (pos >= max_len) break;
        ex.token_ids[pos] = vocab.id(token);
        ex.attention_mask[pos] = 1;
        ++pos;
    }
    return ex;
}

std::vector<std::string> split_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string token;
    while (in >> token) tokens.push_back(token);
    return tokens;
}

}  // namespace rxai
