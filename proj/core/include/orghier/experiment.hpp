#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "orghier/collective.hpp"
#include "orghier/features.hpp"
#include "orghier/ingest.hpp"
#include "orghier/learn.hpp"

namespace orghier {

struct DatasetSpec {
    std::string name = "dataset";
    std::filesystem::path log_path;
    std::filesystem::path roster_path;
    TimestampFormat format = TimestampFormat::iso8601;
    char delimiter = ';';
    ActivityMode activity = ActivityMode::sent;
    FeatureConfig features;  // overtime flag, closeness mode, ...
};

// Ingest -> filter -> minimum activity -> rebuild -> features. The network
// and features are recomputed from scratch for every min_activity value.
struct Pipeline {
    Roster roster;                     // survivors only
    std::vector<EmailRecord> records;  // restricted to survivors
    FilterStats filter_stats;          // from the initial roster filter
    SocialNetwork net;
    FeatureTable table;
    std::vector<std::string> warnings;  // non-convergence reports
};

Pipeline build_pipeline(const DatasetSpec& dataset, int min_activity);

enum class Algorithm { tree, forest, collective, random_baseline };

std::string algorithm_name(Algorithm algo);

struct CcSearchSpace {
    std::vector<std::string> utilities;                 // empty = every feature column
    std::vector<int> thresholds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> jaccards = {0.7, 0.8, 0.9, 0.99};
    int max_iterations = 100;
    int u_max = 2;
};

struct SweepSpec {
    DatasetSpec dataset;
    Algorithm algorithm = Algorithm::forest;
    int levels = 2;
    std::vector<int> min_activity = {1, 2, 3, 4, 5};
    std::vector<double> fractions = {0.1, 0.2, 0.3, 0.4, 0.5,
                                     0.6, 0.7, 0.8, 0.9, 1.0};  // features (supervised)
    std::vector<double> known_fractions = {0.1, 0.2, 0.3, 0.4, 0.5,
                                           0.6, 0.7, 0.8, 0.9};  // collective
    HyperGrid grid;
    CcSearchSpace cc;
    int cv_folds = 5;
    int smote_k = 5;
    int baseline_trials = 1000;
    std::uint64_t master_seed = 1;
    int jobs = 1;
};

// Tree grid: depths 1..20 x max_features 1..n. The full forest grid adds
// n_estimators {1,2,4,...,200}; fast trims it to fit the sweep budget while
// covering the ranges winning configurations land in.
HyperGrid default_tree_grid(std::size_t n_features);
HyperGrid default_forest_grid(std::size_t n_features, bool fast = true);

struct CellMeta {
    int min_activity = 0;
    double fraction = 0.0;
    std::uint64_t seed = 0;
    std::string params;       // winning hyperparameters, "key=value ..."
    double score = 0.0;
    double runtime_ms = 0.0;  // informational; never written to result files
};

struct RankingRecord {
    int min_activity = 0;
    FeatureRanking gini;
    FeatureRanking chi2;
};

struct ResultTable {
    std::string dataset;
    std::string algorithm;
    int levels = 2;
    std::vector<int> row_keys;            // min activity
    std::vector<double> col_keys;         // fraction / known fraction
    std::vector<std::string> col_names;   // formatted column headers
    std::vector<std::vector<double>> scores;
    std::vector<std::vector<CellMeta>> meta;
    std::vector<RankingRecord> rankings;  // supervised sweeps only

    double best_score() const;
};

// Feature ranking comes from the full-feature grid-search winner of the same
// min_activity row and is reused for every reduced fraction.
ResultTable run_supervised_sweep(const SweepSpec& spec);

// Per cell, searches the collective space (utility x threshold x jaccard) and
// keeps the best unknown-only macro-F1.
ResultTable run_collective_sweep(const SweepSpec& spec);

ResultTable run_baseline_sweep(const SweepSpec& spec);

// <out>/<dataset>/<algorithm>/<levels>l/{table.csv, meta.csv, rankings.csv}.
// Byte-stable for identical inputs.
std::filesystem::path emit_results(const ResultTable& table, const std::filesystem::path& out_dir);

}  // namespace orghier
