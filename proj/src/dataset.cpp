#include "rxai/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rxai/common.hpp"

namespace rxai {

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_finite(const std::string& cell) {
    std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    const char* begin = t.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end != begin + t.size()) return std::nullopt;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
}

// RFC-4180 field splitter for one logical record; `pos` walks the buffer and
// records may span lines inside quoted fields.
bool next_record(const std::string& buf, std::size_t& pos,
                 std::vector<std::string>& fields) {
    fields.clear();
    if (pos >= buf.size()) return false;
    std::string field;
    bool quoted = false;
    bool any = false;
    while (pos < buf.size()) {
        char c = buf[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < buf.size() && buf[pos + 1] == '"') {
                    field += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
            any = true;
        } else if (c == '\n') {
            ++pos;
            fields.push_back(field);
            return true;
        } else if (c != '\r') {
            field += c;
            any = true;
        }
        ++pos;
    }
    if (quoted) throw DataError("unterminated quoted field in CSV");
    if (any || !field.empty() || !fields.empty()) {
        fields.push_back(field);
        return true;
    }
    return false;
}

void quote_field(std::ostream& out, const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        out << field;
        return;
    }
    out << '"';
    for (char c : field) {
        if (c == '"') out << "\"\"";
        out << c;
    }
    out << '"';
}

}  // namespace

bool is_missing_token(const std::string& cell) {
    std::string t = lower(trim(cell));
    return t.empty() || t == "nan" || t == "null";
}

const Column* Dataset::find(const std::string& name) const {
    for (const auto& c : columns)
        if (c.spec.name == name) return &c;
    return nullptr;
}

Column* Dataset::find(const std::string& name) {
    for (auto& c : columns)
        if (c.spec.name == name) return &c;
    return nullptr;
}

std::vector<const Column*> Dataset::feature_columns() const {
    std::vector<const Column*> out;
    for (const auto& c : columns)
        if (c.spec.role == ColumnRole::feature) out.push_back(&c);
    return out;
}

Dataset load_csv(const std::string& path,
                 const std::optional<std::vector<ColumnSpec>>& specs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open CSV file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string buf = ss.str();

    std::size_t pos = 0;
    std::vector<std::string> header;
    if (!next_record(buf, pos, header) || header.empty())
        throw DataError("CSV has no header row: " + path);

    std::set<std::string> seen;
    for (const auto& name : header) {
        if (!seen.insert(name).second)
            throw DataError("duplicate column name '" + name + "' in " + path);
    }

    const std::size_t n_cols = header.size();
    std::vector<std::vector<std::string>> cells(n_cols);
    std::vector<std::string> fields;
    while (next_record(buf, pos, fields)) {
        if (fields.size() != n_cols) {
            throw DataError("ragged row in " + path + ": expected " +
                            std::to_string(n_cols) + " fields, got " +
                            std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < n_cols; ++c) cells[c].push_back(fields[c]);
    }
    const std::size_t n_rows = cells.empty() ? 0 : cells[0].size();

    Dataset ds;
    ds.columns.resize(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
        Column& col = ds.columns[c];
        col.spec.name = header[c];

        if (specs) {
            auto it = std::find_if(specs->begin(), specs->end(),
                                   [&](const ColumnSpec& s) { return s.name == header[c]; });
            if (it == specs->end())
                throw DataError("column '" + header[c] + "' missing from supplied specs");
            col.spec = *it;
        } else {
            bool numeric = true;
            for (const auto& cell : cells[c]) {
                if (is_missing_token(cell)) continue;
                if (!parse_finite(cell)) {
                    numeric = false;
                    break;
                }
            }
            col.spec.kind = numeric ? ColumnKind::numeric : ColumnKind::categorical;
            col.spec.role = header[c] == "source" ? ColumnRole::source
                                                  : ColumnRole::feature;
        }

        col.missing.resize(n_rows, 0);
        if (col.is_numeric()) {
            col.numeric.assign(n_rows, std::numeric_limits<double>::quiet_NaN());
            for (std::size_t r = 0; r < n_rows; ++r) {
                if (is_missing_token(cells[c][r])) {
                    col.missing[r] = 1;
                } else {
                    auto v = parse_finite(cells[c][r]);
                    if (!v)
                        throw DataError("cell '" + cells[c][r] + "' in numeric column '" +
                                        header[c] + "' does not parse");
                    col.numeric[r] = *v;
                }
            }
        } else {
            col.text.assign(n_rows, "");
            for (std::size_t r = 0; r < n_rows; ++r) {
                if (is_missing_token(cells[c][r]))
                    col.missing[r] = 1;
                else
                    col.text[r] = cells[c][r];
            }
        }
    }

    ds.source.assign(n_rows, "");
    if (const Column* src = ds.find("source"); src && !src->is_numeric()) {
        for (std::size_t r = 0; r < n_rows; ++r)
            if (!src->missing[r]) ds.source[r] = src->text[r];
    }

    return unify_labels(std::move(ds));
}

Dataset unify_labels(Dataset dataset, const std::vector<std::string>& candidates) {
    Column* label_col = nullptr;
    for (const auto& name : candidates) {
        if (Column* c = dataset.find(name)) {
            label_col = c;
            break;
        }
    }
    if (!label_col)
        throw DataError("no label column found; tried candidates: " +
                        [&] {
                            std::string s;
                            for (const auto& c : candidates) s += (s.empty() ? "" : ", ") + c;
                            return s;
                        }());

    const std::size_t n = dataset.n_rows();
    std::vector<int> labels(n, -1);
    std::set<std::string> distinct;
    for (std::size_t r = 0; r < n; ++r) {
        if (label_col->missing[r])
            throw DataError("missing value in label column '" + label_col->spec.name + "'");
        if (label_col->is_numeric()) {
            double v = label_col->numeric[r];
            if (v != 0.0 && v != 1.0)
                throw DataError("numeric label value " + format_double(v) +
                                " is not 0 or 1 in column '" + label_col->spec.name + "'");
            labels[r] = static_cast<int>(v);
            distinct.insert(v == 0.0 ? "0" : "1");
        } else {
            std::string v = lower(trim(label_col->text[r]));
            if (v == "benign")
                labels[r] = 0;
            else if (v == "ransomware")
                labels[r] = 1;
            else
                throw DataError("unmapped label string '" + label_col->text[r] +
                                "' in column '" + label_col->spec.name + "'");
            distinct.insert(v);
        }
    }
    if (distinct.size() > 2)
        throw DataError("label column '" + label_col->spec.name + "' has more than two classes");
    if (distinct.empty())
        throw DataError("label column '" + label_col->spec.name + "' is empty");

    label_col->spec.role = ColumnRole::label;
    // Remaining candidates would leak the answer as features.
    for (const auto& name : candidates) {
        if (Column* c = dataset.find(name); c && c != label_col)
            c->spec.role = ColumnRole::ignore;
    }
    dataset.labels = std::move(labels);
    return dataset;
}

ImputationModel fit_imputer(const Dataset& dataset) {
    ImputationModel model;
    for (const Column* col : dataset.feature_columns()) {
        const std::size_t n = dataset.n_rows();
        if (col->is_numeric()) {
            std::vector<double> present;
            present.reserve(n);
            for (std::size_t r = 0; r < n; ++r)
                if (!col->missing[r]) present.push_back(col->numeric[r]);
            if (present.empty())
                throw DataError("column '" + col->spec.name + "' has no values to impute from");
            std::sort(present.begin(), present.end());
            std::size_t m = present.size();
            double median = (m % 2 == 1)
                                ? present[m / 2]
                                : 0.5 * (present[m / 2 - 1] + present[m / 2]);
            model.numeric_fill[col->spec.name] = median;
        } else {
            std::map<std::string, std::size_t> counts;
            for (std::size_t r = 0; r < n; ++r)
                if (!col->missing[r]) ++counts[col->text[r]];
            if (counts.empty())
                throw DataError("column '" + col->spec.name + "' has no values to impute from");
            // std::map iteration is sorted, so the first max is the
            // lexicographically smallest mode.
            std::string best;
            std::size_t best_count = 0;
            for (const auto& [value, count] : counts) {
                if (count > best_count) {
                    best = value;
                    best_count = count;
                }
            }
            model.categorical_fill[col->spec.name] = best;
        }
    }
    return model;
}

Dataset apply_imputer(const ImputationModel& model, Dataset dataset) {
    for (auto& col : dataset.columns) {
        if (col.spec.role != ColumnRole::feature) continue;
        const std::size_t n = dataset.n_rows();
        if (col.is_numeric()) {
            auto it = model.numeric_fill.find(col.spec.name);
            if (it == model.numeric_fill.end())
                throw DataError("imputer has no fill for numeric column '" + col.spec.name + "'");
            for (std::size_t r = 0; r < n; ++r) {
                if (col.missing[r]) {
                    col.numeric[r] = it->second;
                    col.missing[r] = 0;
                }
            }
        } else {
            auto it = model.categorical_fill.find(col.spec.name);
            if (it == model.categorical_fill.end())
                throw DataError("imputer has no fill for categorical column '" + col.spec.name + "'");
            for (std::size_t r = 0; r < n; ++r) {
                if (col.missing[r]) {
                    col.text[r] = it->second;
                    col.missing[r] = 0;
                }
            }
        }
    }
    return dataset;
}

SplitIndices stratified_split(const Dataset& dataset,
                              const std::array<double, 3>& fractions,
                              std::uint64_t seed) {
    double sum = fractions[0] + fractions[1] + fractions[2];
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("split fractions must sum to 1");
    if (dataset.labels.size() != dataset.n_rows() || dataset.labels.empty())
        throw DataError("dataset has no labels; run unify_labels first");

    const long n = static_cast<long>(dataset.n_rows());
    std::array<std::vector<int>, 2> by_class;
    for (long r = 0; r < n; ++r) by_class[dataset.labels[r]].push_back(static_cast<int>(r));
    for (int c = 0; c < 2; ++c) {
        if (by_class[c].size() < 10)
            throw DataError("class " + std::to_string(c) + " has only " +
                            std::to_string(by_class[c].size()) + " rows; need at least 10");
    }

    const long s_val = std::lround(fractions[1] * static_cast<double>(n));
    const long s_test = std::lround(fractions[2] * static_cast<double>(n));

    // Largest-remainder allocation of a split of size `s` across the two
    // classes; keeps each class within one row of its exact share.
    auto allocate = [&](long s) {
        std::array<long, 2> alloc{};
        std::array<double, 2> frac{};
        long assigned = 0;
        for (int c = 0; c < 2; ++c) {
            double target = static_cast<double>(by_class[c].size()) * static_cast<double>(s) /
                            static_cast<double>(n);
            alloc[c] = static_cast<long>(target);
            frac[c] = target - static_cast<double>(alloc[c]);
            assigned += alloc[c];
        }
        while (assigned < s) {
            int pick = (frac[1] > frac[0]) ? 1 : 0;
            ++alloc[pick];
            frac[pick] = -1.0;
            ++assigned;
        }
        return alloc;
    };
    const auto val_alloc = allocate(s_val);
    const auto test_alloc = allocate(s_test);

    SplitIndices split;
    split.seed = seed;
    for (int c = 0; c < 2; ++c) {
        auto rows = by_class[c];
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(c)));
        rng.shuffle(rows);
        long nv = val_alloc[c];
        long nt = test_alloc[c];
        if (nv + nt > static_cast<long>(rows.size()))
            throw DataError("class " + std::to_string(c) + " too small for requested split");
        split.validation.insert(split.validation.end(), rows.begin(), rows.begin() + nv);
        split.test.insert(split.test.end(), rows.begin() + nv, rows.begin() + nv + nt);
        split.train.insert(split.train.end(), rows.begin() + nv + nt, rows.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.validation.begin(), split.validation.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

Dataset select_rows(const Dataset& dataset, const std::vector<int>& indices) {
    Dataset out;
    out.columns.reserve(dataset.columns.size());
    for (const auto& col : dataset.columns) {
        Column nc;
        nc.spec = col.spec;
        for (int r : indices) {
            nc.missing.push_back(col.missing[r]);
            if (col.is_numeric())
                nc.numeric.push_back(col.numeric[r]);
            else
                nc.text.push_back(col.text[r]);
        }
        out.columns.push_back(std::move(nc));
    }
    for (int r : indices) {
        if (!dataset.labels.empty()) out.labels.push_back(dataset.labels[r]);
        if (!dataset.source.empty()) out.source.push_back(dataset.source[r]);
    }
    return out;
}

Dataset sample_rows(const Dataset& dataset, std::size_t n, std::uint64_t seed) {
    const std::size_t total = dataset.n_rows();
    if (n >= total) return dataset;
    std::vector<int> indices(total);
    for (std::size_t i = 0; i < total; ++i) indices[i] = static_cast<int>(i);
    Rng rng(mix_seed(seed, 0x5a6d70ULL));
    // Partial Fisher-Yates: the first n entries are a uniform sample.
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = i + rng.below(total - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(n);
    std::sort(indices.begin(), indices.end());
    return select_rows(dataset, indices);
}

Dataset concat_datasets(const std::vector<Dataset>& parts,
                        const std::vector<std::string>& tags) {
    if (parts.empty()) throw DataError("nothing to concatenate");
    if (!tags.empty() && tags.size() != parts.size())
        throw ConfigError("one source tag per input dataset required");

    // Column union in first-seen order; specs must agree where shared.
    std::vector<ColumnSpec> specs;
    for (const auto& part : parts) {
        for (const auto& col : part.columns) {
            auto it = std::find_if(specs.begin(), specs.end(),
                                   [&](const ColumnSpec& s) { return s.name == col.spec.name; });
            if (it == specs.end()) {
                specs.push_back(col.spec);
            } else if (it->kind != col.spec.kind) {
                throw DataError("column '" + col.spec.name + "' has conflicting kinds across inputs");
            }
        }
    }

    Dataset out;
    for (const auto& spec : specs) {
        Column col;
        col.spec = spec;
        out.columns.push_back(std::move(col));
    }
    for (std::size_t p = 0; p < parts.size(); ++p) {
        const Dataset& part = parts[p];
        const std::size_t n = part.n_rows();
        for (auto& col : out.columns) {
            const Column* src = part.find(col.spec.name);
            for (std::size_t r = 0; r < n; ++r) {
                if (src && !src->missing[r]) {
                    col.missing.push_back(0);
                    if (col.is_numeric())
                        col.numeric.push_back(src->numeric[r]);
                    else
                        col.text.push_back(src->text[r]);
                } else {
                    col.missing.push_back(1);
                    if (col.is_numeric())
                        col.numeric.push_back(std::numeric_limits<double>::quiet_NaN());
                    else
                        col.text.push_back("");
                }
            }
        }
        for (std::size_t r = 0; r < n; ++r) {
            out.labels.push_back(part.labels.empty() ? -1 : part.labels[r]);
            std::string tag = tags.empty() ? "" : tags[p];
            if (tag.empty() && r < part.source.size()) tag = part.source[r];
            out.source.push_back(tag);
        }
    }
    return out;
}

void write_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write CSV file: " + path);
    const std::size_t n = dataset.n_rows();
    for (std::size_t c = 0; c < dataset.columns.size(); ++c) {
        if (c) out << ',';
        quote_field(out, dataset.columns[c].spec.name);
    }
    out << '\n';
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < dataset.columns.size(); ++c) {
            if (c) out << ',';
            const Column& col = dataset.columns[c];
            if (col.missing[r]) continue;
            if (col.is_numeric())
                out << format_double(col.numeric[r]);
            else
                quote_field(out, col.text[r]);
        }
        out << '\n';
    }
}

std::vector<ColumnStats> column_stats(const Dataset& dataset) {
    std::vector<ColumnStats> stats;
    for (const auto& col : dataset.columns) {
        if (!col.is_numeric() || col.spec.role == ColumnRole::ignore) continue;
        std::vector<double> values;
        for (std::size_t r = 0; r < dataset.n_rows(); ++r)
            if (!col.missing[r]) values.push_back(col.numeric[r]);
        if (values.empty()) continue;
        std::sort(values.begin(), values.end());

        ColumnStats s;
        s.column = col.spec.name;
        s.count = values.size();
        double sum = 0;
        for (double v : values) sum += v;
        s.mean = sum / static_cast<double>(values.size());
        double ss = 0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        // Sample standard deviation, matching the usual describe() output.
        s.stddev = values.size() > 1
                       ? std::sqrt(ss / static_cast<double>(values.size() - 1))
                       : 0.0;
        s.min = values.front();
        s.max = values.back();
        s.p1 = quantile_sorted(values, 0.01);
        s.p25 = quantile_sorted(values, 0.25);
        s.p50 = quantile_sorted(values, 0.50);
        s.p75 = quantile_sorted(values, 0.75);

        double mode = values.front();
        std::size_t best = 0, run = 0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            run = (i > 0 && values[i] == values[i - 1]) ? run + 1 : 1;
            if (run > best) {
                best = run;
                mode = values[i];
            }
        }
        s.mode = mode;
        stats.push_back(std::move(s));
    }
    return stats;
}

}  // namespace rxai
