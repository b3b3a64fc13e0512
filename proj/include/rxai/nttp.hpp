#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "rxai/dataset.hpp"

namespace rxai {

struct ColumnBins {
    std::string column;
    std::vector<double> edges;  // strictly increasing interior edges
    int n_bins_effective = 1;   // edges.size() + 1
};

// Per-column quantile bin edges. Interior edges sit at the k/n_bins
// quantiles; duplicates collapse, so heavily tied columns end up with fewer
// effective bins.
struct BinningModel {
    std::vector<ColumnBins> columns;  // fitted column order
    int n_bins_requested = 5;

    const ColumnBins* find(const std::string& column) const;
    std::vector<std::string> column_order() const;
};

BinningModel fit_binner(const Dataset& dataset, int n_bins = 5);

// Left-open/right-closed bins: x <= first edge -> 0, e[k-1] < x <= e[k] -> k,
// x beyond the last edge -> last bin.
int bin_value(const BinningModel& model, const std::string& column, double x);

// "{column}_bin_{k}" tokens joined by single spaces. `column_order` defaults
// to the fitted order when empty.
std::string encode_row(const BinningModel& model,
                       const std::map<std::string, double>& row,
                       const std::vector<std::string>& column_order = {});

struct TokenVocab {
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kCls = 2;

    std::vector<std::string> id_to_token;
    std::unordered_map<std::string, int> token_to_id;

    int size() const { return static_cast<int>(id_to_token.size()); }
    int id(const std::string& token) const;
    // FNV-1a over the token list; identifies the vocab in checkpoints.
    std::string content_hash() const;
};

// Ids follow first-seen order after the specials, so identical input order
// gives an identical vocab.
TokenVocab build_vocab(const std::vector<std::string>& texts);

struct EncodedExample {
    std::vector<int> token_ids;               // length max_len
    std::vector<std::uint8_t> attention_mask; // 1 on CLS and real tokens
    int label = -1;
};

// [CLS] + token ids (unknowns -> UNK), truncated to max_len and right-padded.
EncodedExample tokenize(const TokenVocab& vocab, const std::string& text,
                        int max_len = 128);

std::vector<std::string> split_tokens(const std::string& text);

}  // namespace rxai
