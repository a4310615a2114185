#include "orghier/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>

namespace orghier {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    std::vector<std::future<void>> pool;
    std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    for (std::size_t j = 0; j < n_workers; ++j)
        pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
}

std::string format_fraction(double f) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.1f", f);
    return buf;
}

std::string format_score(double s) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.4f", s);
    return buf;
}

std::uint64_t algorithm_tag(Algorithm algo) { return static_cast<std::uint64_t>(algo) + 101; }

std::uint64_t cell_seed(const SweepSpec& spec, int min_activity, double fraction) {
    return derive_seed(spec.master_seed,
                       {algorithm_tag(spec.algorithm), static_cast<std::uint64_t>(spec.levels),
                        static_cast<std::uint64_t>(min_activity),
                        static_cast<std::uint64_t>(std::llround(fraction * 100.0))});
}

}  // namespace

std::string algorithm_name(Algorithm algo) {
    switch (algo) {
        case Algorithm::tree: return "tree";
        case Algorithm::forest: return "forest";
        case Algorithm::collective: return "collective";
        case Algorithm::random_baseline: return "random-baseline";
    }
    return "unknown";
}

Pipeline build_pipeline(const DatasetSpec& dataset, int min_activity) {
    if (dataset.features.overtime && dataset.format != TimestampFormat::iso8601)
        throw DataError("overtime needs local wall-clock timestamps (iso8601 input)");

    Pipeline p;
    IngestOptions options{dataset.format, dataset.delimiter};
    auto raw = parse_email_log(dataset.log_path, options);
    Roster full = parse_roster(dataset.roster_path, dataset.delimiter);
    auto filtered = filter_records(raw, full, &p.filter_stats);
    auto activity = build_activity_index(filtered, dataset.activity);
    p.roster = apply_min_activity(full, activity, min_activity);
    p.records = filter_records(filtered, p.roster);
    p.net = SocialNetwork::build(p.records, p.roster);
    p.table = assemble_features(p.net, p.records, p.roster, dataset.features, &p.warnings);
    return p;
}

HyperGrid default_tree_grid(std::size_t n_features) {
    HyperGrid grid;
    for (int d = 1; d <= 20; ++d) grid.max_depth.push_back(d);
    for (int f = 1; f <= static_cast<int>(n_features); ++f) grid.max_features.push_back(f);
    return grid;
}

HyperGrid default_forest_grid(std::size_t n_features, bool fast) {
    HyperGrid grid;
    if (!fast) {
        grid = default_tree_grid(n_features);
        grid.n_estimators = {1, 2, 4, 8, 16, 32, 64, 100, 200};
        return grid;
    }
    grid.max_depth = {2, 4, 6, 8, 10, 14};
    for (int f : {1, 2, 4, 6, 8, 12, 16})
        if (f <= static_cast<int>(n_features)) grid.max_features.push_back(f);
    grid.n_estimators = {8, 16, 32};
    return grid;
}

double ResultTable::best_score() const {
    double best = 0.0;
    for (const auto& row : scores)
        for (double s : row) best = std::max(best, s);
    return best;
}

namespace {

std::string point_to_string(const GridPoint& point) {
    std::string s = "max_depth=" + std::to_string(point.max_depth) +
                    " max_features=" + std::to_string(point.max_features);
    if (point.n_estimators > 0) s += " n_estimators=" + std::to_string(point.n_estimators);
    return s;
}

HyperGrid clamp_grid(const HyperGrid& grid, std::size_t n_features) {
    HyperGrid g = grid;
    g.max_features.clear();
    for (int f : grid.max_features)
        if (f <= static_cast<int>(n_features)) g.max_features.push_back(f);
    if (g.max_features.empty()) g.max_features.push_back(static_cast<int>(n_features));
    return g;
}

}  // namespace

ResultTable run_supervised_sweep(const SweepSpec& spec) {
    if (spec.algorithm != Algorithm::tree && spec.algorithm != Algorithm::forest)
        throw DataError("run_supervised_sweep expects the tree or forest algorithm");
    ModelKind kind = spec.algorithm == Algorithm::tree ? ModelKind::tree : ModelKind::forest;

    ResultTable table;
    table.dataset = spec.dataset.name;
    table.algorithm = algorithm_name(spec.algorithm);
    table.levels = spec.levels;
    table.row_keys = spec.min_activity;
    table.col_keys = spec.fractions;
    for (double f : spec.fractions) table.col_names.push_back(format_fraction(f));
    table.scores.assign(spec.min_activity.size(),
                        std::vector<double>(spec.fractions.size(), 0.0));
    table.meta.assign(spec.min_activity.size(), std::vector<CellMeta>(spec.fractions.size()));

    for (std::size_t row = 0; row < spec.min_activity.size(); ++row) {
        int min_activity = spec.min_activity[row];
        Pipeline pipeline = build_pipeline(spec.dataset, min_activity);
        LabeledMatrix full = to_matrix(pipeline.table);
        full.y = flatten_labels(full.y, spec.levels);
        HyperGrid grid = clamp_grid(spec.grid, full.n_features());

        // full-feature cell first: the feature ranking of this row comes
        // from its grid-search winner
        std::uint64_t full_seed = cell_seed(spec, min_activity, 1.0);
        auto full_start = std::chrono::steady_clock::now();
        GridSearchResult full_result =
            grid_search(full, grid, kind, spec.cv_folds, full_seed, spec.smote_k, spec.jobs);
        double full_ms = elapsed_ms(full_start);

        LabeledMatrix rank_data = smote(full, spec.smote_k, derive_seed(full_seed, {0x72616e6bULL}));
        std::vector<double> importances;
        if (kind == ModelKind::tree) {
            DecisionTree model;
            model.fit(rank_data, {full_result.best.max_depth, full_result.best.max_features},
                      derive_seed(full_seed, {0x6d6f64656cULL}));
            importances = model.importances();
        } else {
            RandomForest model;
            model.fit(rank_data,
                      {{full_result.best.max_depth, full_result.best.max_features},
                       full_result.best.n_estimators,
                       true},
                      derive_seed(full_seed, {0x6d6f64656cULL}));
            importances = model.importances();
        }
        RankingRecord record;
        record.min_activity = min_activity;
        record.gini = rank_features_gini(importances, pipeline.table.feature_names);
        record.chi2 = rank_features_chi2(pipeline.table);
        table.rankings.push_back(record);

        for (std::size_t col = 0; col < spec.fractions.size(); ++col) {
            double fraction = spec.fractions[col];
            CellMeta& meta = table.meta[row][col];
            meta.min_activity = min_activity;
            meta.fraction = fraction;
            if (fraction >= 1.0) {
                meta.seed = full_seed;
                meta.params = point_to_string(full_result.best);
                meta.score = full_result.best_score;
                meta.runtime_ms = full_ms;
                table.scores[row][col] = full_result.best_score;
                continue;
            }
            auto start = std::chrono::steady_clock::now();
            FeatureTable reduced = select_top_features(pipeline.table, record.gini, fraction);
            LabeledMatrix data = to_matrix(reduced);
            data.y = flatten_labels(data.y, spec.levels);
            HyperGrid cell_grid = clamp_grid(grid, data.n_features());
            std::uint64_t seed = cell_seed(spec, min_activity, fraction);
            GridSearchResult result =
                grid_search(data, cell_grid, kind, spec.cv_folds, seed, spec.smote_k, spec.jobs);
            table.scores[row][col] = result.best_score;
            meta.seed = seed;
            meta.params = point_to_string(result.best);
            meta.score = result.best_score;
            meta.runtime_ms = elapsed_ms(start);
        }
    }
    return table;
}

ResultTable run_collective_sweep(const SweepSpec& spec) {
    ResultTable table;
    table.dataset = spec.dataset.name;
    table.algorithm = algorithm_name(Algorithm::collective);
    table.levels = spec.levels;
    table.row_keys = spec.min_activity;
    table.col_keys = spec.known_fractions;
    for (double f : spec.known_fractions) table.col_names.push_back(format_fraction(f));
    table.scores.assign(spec.min_activity.size(),
                        std::vector<double>(spec.known_fractions.size(), 0.0));
    table.meta.assign(spec.min_activity.size(),
                      std::vector<CellMeta>(spec.known_fractions.size()));

    for (std::size_t row = 0; row < spec.min_activity.size(); ++row) {
        int min_activity = spec.min_activity[row];
        Pipeline pipeline = build_pipeline(spec.dataset, min_activity);
        UndirectedGraph graph = undirected_projection(pipeline.net);
        std::vector<std::string> utilities =
            spec.cc.utilities.empty() ? pipeline.table.feature_names : spec.cc.utilities;

        parallel_for(spec.known_fractions.size(), spec.jobs, [&](std::size_t col) {
            double known = spec.known_fractions[col];
            std::uint64_t seed = cell_seed(spec, min_activity, known);
            auto start = std::chrono::steady_clock::now();

            double best = -1.0, best_all = 0.0;
            std::string best_params;
            for (const auto& utility : utilities) {
                for (int threshold : spec.cc.thresholds) {
                    for (double jaccard : spec.cc.jaccards) {
                        CcParams params;
                        params.utility_feature = utility;
                        params.known_fraction = known;
                        params.threshold = threshold;
                        params.jaccard_min = jaccard;
                        params.max_iterations = spec.cc.max_iterations;
                        params.u_max = spec.cc.u_max;
                        params.levels = spec.levels;
                        CcRun run = cc_run(pipeline.table, graph, params, seed);
                        double score =
                            evaluate_cc(run, pipeline.table, spec.levels, CcScope::unknown_only);
                        if (score > best) {
                            best = score;
                            best_all = evaluate_cc(run, pipeline.table, spec.levels, CcScope::all);
                            best_params = "utility=" + utility +
                                          " threshold=" + std::to_string(threshold) +
                                          " jaccard=" + format_fraction(jaccard) +
                                          " score_all=" + format_score(best_all);
                        }
                    }
                }
            }
            table.scores[row][col] = best;
            CellMeta& meta = table.meta[row][col];
            meta.min_activity = min_activity;
            meta.fraction = known;
            meta.seed = seed;
            meta.params = best_params;
            meta.score = best;
            meta.runtime_ms = elapsed_ms(start);
        });
    }
    return table;
}

ResultTable run_baseline_sweep(const SweepSpec& spec) {
    ResultTable table;
    table.dataset = spec.dataset.name;
    table.algorithm = algorithm_name(Algorithm::random_baseline);
    table.levels = spec.levels;
    table.row_keys = spec.min_activity;
    table.col_keys = {1.0};
    table.col_names = {"baseline"};
    table.scores.assign(spec.min_activity.size(), std::vector<double>(1, 0.0));
    table.meta.assign(spec.min_activity.size(), std::vector<CellMeta>(1));

    for (std::size_t row = 0; row < spec.min_activity.size(); ++row) {
        int min_activity = spec.min_activity[row];
        Pipeline pipeline = build_pipeline(spec.dataset, min_activity);
        auto y = flatten_labels(pipeline.table.labels, spec.levels);
        std::uint64_t seed = cell_seed(spec, min_activity, 1.0);
        auto start = std::chrono::steady_clock::now();
        double score = random_baseline(y, seed, spec.baseline_trials);
        table.scores[row][0] = score;
        table.meta[row][0] = {min_activity, 1.0, seed,
                              "trials=" + std::to_string(spec.baseline_trials), score,
                              elapsed_ms(start)};
    }
    return table;
}

std::filesystem::path emit_results(const ResultTable& table,
                                   const std::filesystem::path& out_dir) {
    std::filesystem::path dir = out_dir / table.dataset / table.algorithm /
                                (std::to_string(table.levels) + "l");
    std::filesystem::create_directories(dir);

    {
        std::ofstream out(dir / "table.csv", std::ios::binary);
        if (!out) throw DataError("cannot write " + (dir / "table.csv").string());
        out << "min_activity";
        for (const auto& name : table.col_names) out << ',' << name;
        out << '\n';
        for (std::size_t row = 0; row < table.row_keys.size(); ++row) {
            out << table.row_keys[row];
            for (double score : table.scores[row]) out << ',' << format_score(score);
            out << '\n';
        }
    }
    {
        std::ofstream out(dir / "meta.csv", std::ios::binary);
        if (!out) throw DataError("cannot write " + (dir / "meta.csv").string());
        out << "min_activity,fraction,seed,params,score\n";
        for (const auto& row : table.meta)
            for (const auto& meta : row)
                out << meta.min_activity << ',' << format_fraction(meta.fraction) << ','
                    << meta.seed << ',' << meta.params << ',' << format_score(meta.score) << '\n';
    }
    if (!table.rankings.empty()) {
        std::ofstream out(dir / "rankings.csv", std::ios::binary);
        if (!out) throw DataError("cannot write " + (dir / "rankings.csv").string());
        out << "min_activity,ranker,rank,feature,score\n";
        char buf[32];
        for (const auto& record : table.rankings) {
            for (int which = 0; which < 2; ++which) {
                const FeatureRanking& ranking = which == 0 ? record.gini : record.chi2;
                const char* name = which == 0 ? "gini" : "chi2";
                for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
                    std::snprintf(buf, sizeof(buf), "%.6f", ranking.entries[i].second);
                    out << record.min_activity << ',' << name << ',' << i + 1 << ','
                        << ranking.entries[i].first << ',' << buf << '\n';
                }
            }
        }
    }
    return dir;
}

}  // namespace orghier
