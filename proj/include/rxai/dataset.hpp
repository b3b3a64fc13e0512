#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rxai {

enum class ColumnKind { numeric, categorical };
enum class ColumnRole { feature, label, source, ignore };

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    ColumnRole role = ColumnRole::feature;
};

// One column of a table. Numeric cells live in `numeric`, categorical cells
// in `text`; `missing` flags empty/NaN/null cells for either kind. All three
// arrays have one entry per row.
struct Column {
    ColumnSpec spec;
    std::vector<double> numeric;
    std::vector<std::string> text;
    std::vector<std::uint8_t> missing;

    bool is_numeric() const { return spec.kind == ColumnKind::numeric; }
};

// Labels are 0=Benign, 1=Ransomware once unify_labels has run; until then
// `labels` is empty.
struct Dataset {
    std::vector<Column> columns;
    std::vector<int> labels;
    std::vector<std::string> source;

    std::size_t n_rows() const {
        return columns.empty() ? 0 : columns.front().missing.size();
    }
    const Column* find(const std::string& name) const;
    Column* find(const std::string& name);
    std::vector<const Column*> feature_columns() const;
};

struct ImputationModel {
    std::map<std::string, double> numeric_fill;
    std::map<std::string, std::string> categorical_fill;
};

struct SplitIndices {
    std::vector<int> train;
    std::vector<int> validation;
    std::vector<int> test;
    std::uint64_t seed = 0;
};

// True for the cell texts that parse to missing: empty, "nan", "null"
// (case-insensitive).
bool is_missing_token(const std::string& cell);

// Parses a CSV (RFC-4180 quoting, header required). Column kinds are
// inferred unless specs are given: a column is numeric when every non-missing
// cell parses as a finite real. Label candidates ("label", then "prediction")
// are unified into 0/1 labels; a column named "source" feeds per-row tags.
Dataset load_csv(const std::string& path,
                 const std::optional<std::vector<ColumnSpec>>& specs = {});

// Promotes the first candidate column to the canonical binary label.
// String values map case-insensitively {benign -> 0, ransomware -> 1};
// numeric values must already be 0/1. Other candidate columns are demoted to
// role=ignore.
Dataset unify_labels(Dataset dataset,
                     const std::vector<std::string>& candidates = {"label",
                                                                   "prediction"});

// Median for numeric features (even count: mean of the two middle values),
// mode for categorical features (ties: lexicographically smallest).
ImputationModel fit_imputer(const Dataset& dataset);

Dataset apply_imputer(const ImputationModel& model, Dataset dataset);

// Deterministic stratified split. Split sizes are round(N*f) for validation
// and test with the remainder going to train; within each split the per-class
// counts stay within one row of the global proportion (largest-remainder
// allocation per class). Each class needs at least 10 rows.
SplitIndices stratified_split(const Dataset& dataset,
                              const std::array<double, 3>& fractions,
                              std::uint64_t seed);

// Row subset in the order given by `indices`.
Dataset select_rows(const Dataset& dataset, const std::vector<int>& indices);

// Seeded uniform sub-sample without replacement; original row order is kept.
Dataset sample_rows(const Dataset& dataset, std::size_t n, std::uint64_t seed);

// Concatenates datasets row-wise over the union of their columns; cells for
// absent columns are missing. `tags` overwrite the per-row source when given.
Dataset concat_datasets(const std::vector<Dataset>& parts,
                        const std::vector<std::string>& tags = {});

// Writes all columns back out; finite numerics round-trip bit-exactly.
void write_csv(const Dataset& dataset, const std::string& path);

// Per-column summary used by the prepare report (count of non-missing values,
// moments, quantiles at 1/25/50/75%, mode).
struct ColumnStats {
    std::string column;
    std::size_t count = 0;
    double mean = 0, stddev = 0, min = 0, p1 = 0, p25 = 0, p50 = 0, p75 = 0,
           max = 0, mode = 0;
};
std::vector<ColumnStats> column_stats(const Dataset& dataset);

}  // namespace rxai
