#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rxai/dataset.hpp"
#include "rxai/nttp.hpp"

namespace rxai::testing {

// Synthetic telemetry shaped like the merged ransomware tables: ten numeric
// columns with known exact medians, a half-missing categorical column, string
// labels, and a source tag column. Three "pattern" rows are appended whose
// values land in bins (2,2,2,2,1,...) for the first five columns under a
// 5-quantile binner fitted on the whole set.
struct TelemetryFixture {
    Dataset dataset;
    std::vector<int> pattern_rows;  // indices of the appended pattern rows
};

// Exact medians by construction (30% of each column sits on the median atom).
inline const std::vector<std::pair<std::string, double>>& telemetry_medians() {
    static const std::vector<std::pair<std::string, double>> medians = {
        {"r", 71.0},       {"rw", 73.0},  {"rx", 28.0},
        {"rwc", 27.0},     {"rxw", 5.0},  {"rxwc", 0.0},
        {"usd", 3044.5},   {"btc", 13.0}, {"netflow_bytes", 1038.5},
        {"clusters", 1.0},
    };
    return medians;
}

TelemetryFixture make_telemetry_dataset(std::uint64_t seed, std::size_t n_rows);

// Writes the fixture as one merged CSV (with label + source columns).
void write_telemetry_csv(const TelemetryFixture& fixture, const std::string& path);

// Writes two per-source CSVs: the process-memory file keeps the "label"
// column; the network file uses "prediction". Neither carries a source column.
struct TelemetryFiles {
    std::string pm_path;
    std::string net_path;
};
TelemetryFiles write_telemetry_csvs(const TelemetryFixture& fixture,
                                    const std::string& dir);

// Token sentences where the rule "port_bin_1 present => Ransomware" holds,
// with optional label-flip noise. Ten tokens per sentence.
struct PlantedRule {
    std::vector<std::string> texts;
    std::vector<int> labels;        // after noise
    std::vector<int> clean_labels;  // rule labels
};
PlantedRule make_planted_rule(std::uint64_t seed, std::size_t n, double noise_rate);

std::vector<EncodedExample> encode_texts(const TokenVocab& vocab,
                                         const std::vector<std::string>& texts,
                                         const std::vector<int>& labels,
                                         int max_len = 128);

}  // namespace rxai::testing
