#include "fixtures.hpp"

#include <filesystem>

#include "rxai/common.hpp"

namespace rxai::testing {

namespace {

struct ColumnPlan {
    std::string name;
    double median;
    double below_lo, below_hi;  // 35% of mass
    double above_lo, above_hi;  // 35% of mass (60%/45% for the atom-heavy ones)
    double atom_frac;           // mass pinned exactly at the median
    double pattern_value;       // appended pattern rows
};

// below/above windows are spaced off the median so the 20/80% quantiles are
// distinct from it while the 40/60% quantiles collapse onto the atom.
std::vector<ColumnPlan> column_plans() {
    auto standard = [](const std::string& name, double m, double lo, double pattern) {
        return ColumnPlan{name, m, lo, 0.8 * m, 1.2 * m, 3.0 * m, 0.30, pattern};
    };
    return {
        standard("r", 71.0, 1.0, 1.25 * 71.0),
        standard("rw", 73.0, 4.0, 1.25 * 73.0),
        standard("rx", 28.0, 1.0, 1.25 * 28.0),
        standard("rwc", 27.0, 0.0, 1.25 * 27.0),
        standard("rxw", 5.0, 0.5, 5.0),
        // 65% zeros, the rest spread upward.
        ColumnPlan{"rxwc", 0.0, 0.0, 0.0, 0.5, 37.0, 0.65, 0.0},
        standard("usd", 3044.5, 1.0, 1.25 * 3044.5),
        standard("btc", 13.0, 1.0, 1.25 * 13.0),
        standard("netflow_bytes", 1038.5, 1.0, 1.25 * 1038.5),
        // 55% ones.
        ColumnPlan{"clusters", 1.0, 1.0, 1.0, 1.5, 12.0, 0.55, 1.0},
    };
}

}  // namespace

TelemetryFixture make_telemetry_dataset(std::uint64_t seed, std::size_t n_rows) {
    const auto plans = column_plans();
    const std::size_t n_pattern = 3;
    const std::size_t total = n_rows + n_pattern;

    TelemetryFixture fixture;
    Dataset& ds = fixture.dataset;

    Rng rng(mix_seed(seed, 0xf1c7ULL));
    std::vector<std::vector<double>> values(plans.size(), std::vector<double>(total));
    for (std::size_t c = 0; c < plans.size(); ++c) {
        const ColumnPlan& plan = plans[c];
        const bool has_below = plan.below_hi > plan.below_lo;
        const double below_frac = has_below ? (1.0 - plan.atom_frac) / 2.0 : 0.0;
        for (std::size_t r = 0; r < n_rows; ++r) {
            double u = rng.uniform();
            if (u < below_frac)
                values[c][r] = rng.uniform(plan.below_lo, plan.below_hi);
            else if (u < below_frac + plan.atom_frac)
                values[c][r] = plan.median;
            else
                values[c][r] = rng.uniform(plan.above_lo, plan.above_hi);
        }
        for (std::size_t r = n_rows; r < total; ++r) values[c][r] = plan.pattern_value;
    }

    // Labels follow the btc column (above-median activity reads as
    // ransomware), with a 2% flip.
    std::vector<int> labels(total);
    const std::size_t btc_idx = 7;
    for (std::size_t r = 0; r < total; ++r) {
        labels[r] = values[btc_idx][r] > 13.0 ? 1 : 0;
        if (r < n_rows && rng.uniform() < 0.02) labels[r] = 1 - labels[r];
    }

    for (std::size_t c = 0; c < plans.size(); ++c) {
        Column col;
        col.spec = {plans[c].name, ColumnKind::numeric, ColumnRole::feature};
        col.numeric = std::move(values[c]);
        col.missing.assign(total, 0);
        ds.columns.push_back(std::move(col));
    }

    // ~4% missing cells in rw and usd; the median atom is wide enough that
    // the median over the remaining values is unchanged.
    for (const char* name : {"rw", "usd"}) {
        Column* col = ds.find(name);
        for (std::size_t r = 0; r < n_rows; ++r) {
            if (rng.uniform() < 0.04) {
                col->missing[r] = 1;
                col->numeric[r] = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }

    // Half-missing categorical column, mode "tcp".
    {
        Column col;
        col.spec = {"protocol", ColumnKind::categorical, ColumnRole::feature};
        col.text.assign(total, "");
        col.missing.assign(total, 0);
        for (std::size_t r = 0; r < total; ++r) {
            double u = rng.uniform();
            if (u < 0.5) {
                col.missing[r] = 1;
            } else if (u < 0.78) {
                col.text[r] = "tcp";
            } else if (u < 0.92) {
                col.text[r] = "udp";
            } else {
                col.text[r] = "icmp";
            }
        }
        ds.columns.push_back(std::move(col));
    }

    {
        Column col;
        col.spec = {"label", ColumnKind::categorical, ColumnRole::label};
        col.missing.assign(total, 0);
        for (std::size_t r = 0; r < total; ++r)
            col.text.push_back(labels[r] ? "Ransomware" : "Benign");
        ds.columns.push_back(std::move(col));
    }

    {
        Column col;
        col.spec = {"source", ColumnKind::categorical, ColumnRole::source};
        col.missing.assign(total, 0);
        for (std::size_t r = 0; r < total; ++r) {
            bool pm = r < n_rows / 2;
            col.text.push_back(pm ? "process_memory" : "network_traffic");
        }
        ds.columns.push_back(std::move(col));
    }

    ds.labels = labels;
    const Column* src = ds.find("source");
    ds.source = src->text;
    for (std::size_t r = n_rows; r < total; ++r)
        fixture.pattern_rows.push_back(static_cast<int>(r));
    return fixture;
}

void write_telemetry_csv(const TelemetryFixture& fixture, const std::string& path) {
    write_csv(fixture.dataset, path);
}

TelemetryFiles write_telemetry_csvs(const TelemetryFixture& fixture,
                                    const std::string& dir) {
    std::filesystem::create_directories(dir);
    const Dataset& ds = fixture.dataset;
    std::vector<int> pm_rows, net_rows;
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
        (ds.source[r] == "process_memory" ? pm_rows : net_rows).push_back(static_cast<int>(r));

    auto strip = [](Dataset d, const std::string& label_name) {
        std::vector<Column> kept;
        for (auto& col : d.columns) {
            if (col.spec.name == "source") continue;
            if (col.spec.name == "label") col.spec.name = label_name;
            kept.push_back(std::move(col));
        }
        d.columns = std::move(kept);
        return d;
    };

    TelemetryFiles files;
    files.pm_path = dir + "/pm.csv";
    files.net_path = dir + "/net.csv";
    write_csv(strip(select_rows(ds, pm_rows), "label"), files.pm_path);
    write_csv(strip(select_rows(ds, net_rows), "prediction"), files.net_path);
    return files;
}

PlantedRule make_planted_rule(std::uint64_t seed, std::size_t n, double noise_rate) {
    struct TokenColumn {
        const char* name;
        int n_bins;
    };
    static const TokenColumn columns[] = {
        {"port", 3},          {"btc", 3}, {"usd", 4}, {"clusters", 2},
        {"netflow_bytes", 5}, {"proto", 3}, {"r", 3},  {"rw", 4},
        {"rx", 3},            {"flags", 2},
    };

    PlantedRule data;
    Rng rng(mix_seed(seed, 0x9a7eULL));
    for (std::size_t i = 0; i < n; ++i) {
        std::string text;
        int port_bin;
        // port lands on bin 1 half the time so the classes are balanced.
        double u = rng.uniform();
        if (u < 0.5)
            port_bin = 1;
        else
            port_bin = u < 0.75 ? 0 : 2;
        for (const auto& col : columns) {
            int bin = std::string(col.name) == "port"
                          ? port_bin
                          : static_cast<int>(rng.below(col.n_bins));
            if (!text.empty()) text += ' ';
            text += std::string(col.name) + "_bin_" + std::to_string(bin);
        }
        int clean = port_bin == 1 ? 1 : 0;
        int label = clean;
        if (noise_rate > 0.0 && rng.uniform() < noise_rate) label = 1 - label;
        data.texts.push_back(std::move(text));
        data.clean_labels.push_back(clean);
        data.labels.push_back(label);
    }
    return data;
}

std::vector<EncodedExample> encode_texts(const TokenVocab& vocab,
                                         const std::vector<std::string>& texts,
                                         const std::vector<int>& labels, int max_len) {
    std::vector<EncodedExample> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        EncodedExample ex = tokenize(vocab, texts[i], max_len);
        ex.label = labels[i];
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace rxai::testing
