// orghier: reconstructs organizational hierarchy levels from email metadata.
// Subcommands: validate, features, train, collective, sweep, report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <thread>

#include <CLI11.hpp>

#include "orghier/experiment.hpp"

namespace fs = std::filesystem;
using namespace orghier;

namespace {

struct Options {
    std::string log, roster, name = "dataset";
    std::string format = "iso8601";
    std::string delimiter = ";";
    bool overtime = false;
    std::string activity = "sent";
    std::string closeness = "scaled";
    std::string paths = "unweighted";
    std::string cliques = "maximal";

    int levels = 2;
    int min_activity = 1;
    double fraction = 1.0;
    double known_fraction = 0.5;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string out = "results";
    std::string algo = "forest";
    std::string grid = "fast";
    double holdout = 0.0;

    std::string utility;  // empty = search the whole space
    int threshold = 0;    // 0 = search
    double jaccard = 0.0; // 0 = search
    int u_max = 2;
    int max_iterations = 100;
    int trials = 1000;

    std::string export_network;
    std::vector<int> min_activity_list = {1, 2, 3, 4, 5};
};

// flat "key = value" config; command-line flags win over file values
std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t");
            if (a == std::string::npos) return std::string{};
            std::size_t b = s.find_last_not_of(" \t");
            return s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        for (char& c : key)
            if (c == '-') c = '_';
        values[key] = trim(line.substr(eq + 1));
    }
    return values;
}

void apply_config(Options& opt, const std::map<std::string, std::string>& cfg) {
    auto get = [&](const char* key) -> std::optional<std::string> {
        auto it = cfg.find(key);
        if (it == cfg.end()) return std::nullopt;
        return it->second;
    };
    auto set_str = [&](const char* key, std::string& target) {
        if (auto v = get(key)) target = *v;
    };
    auto set_int = [&](const char* key, int& target) {
        if (auto v = get(key)) target = std::stoi(*v);
    };
    auto set_double = [&](const char* key, double& target) {
        if (auto v = get(key)) target = std::stod(*v);
    };
    set_str("log", opt.log);
    set_str("roster", opt.roster);
    set_str("name", opt.name);
    set_str("format", opt.format);
    set_str("delimiter", opt.delimiter);
    if (auto v = get("overtime")) opt.overtime = (*v == "true" || *v == "on" || *v == "1");
    set_str("activity", opt.activity);
    set_str("closeness", opt.closeness);
    set_str("paths", opt.paths);
    set_str("cliques", opt.cliques);
    set_int("levels", opt.levels);
    set_int("min_activity", opt.min_activity);
    set_double("fraction", opt.fraction);
    set_double("known_fraction", opt.known_fraction);
    if (auto v = get("seed")) opt.seed = std::stoull(*v);
    set_int("jobs", opt.jobs);
    set_str("out", opt.out);
    set_str("algo", opt.algo);
    set_str("grid", opt.grid);
    set_double("holdout", opt.holdout);
    set_str("utility", opt.utility);
    set_int("threshold", opt.threshold);
    set_double("jaccard", opt.jaccard);
    set_int("u_max", opt.u_max);
    set_int("max_iterations", opt.max_iterations);
    set_int("trials", opt.trials);
}

DatasetSpec dataset_from(const Options& opt) {
    if (opt.log.empty() || opt.roster.empty())
        throw DataError("both --log and --roster are required (or set via --config)");
    DatasetSpec spec;
    spec.name = opt.name;
    spec.log_path = opt.log;
    spec.roster_path = opt.roster;
    spec.format = opt.format == "epoch" ? TimestampFormat::epoch : TimestampFormat::iso8601;
    if (opt.delimiter.size() != 1) throw DataError("delimiter must be a single character");
    spec.delimiter = opt.delimiter[0];
    spec.activity = opt.activity == "any" ? ActivityMode::any : ActivityMode::sent;
    spec.features.overtime = opt.overtime;
    spec.features.closeness =
        opt.closeness == "literal" ? ClosenessMode::literal : ClosenessMode::scaled;
    spec.features.paths = opt.paths == "weighted" ? PathMode::weighted : PathMode::unweighted;
    spec.features.cliques = opt.cliques == "all" ? CliqueMode::all : CliqueMode::maximal;
    return spec;
}

Algorithm algo_from(const std::string& name) {
    if (name == "tree") return Algorithm::tree;
    if (name == "forest") return Algorithm::forest;
    if (name == "collective") return Algorithm::collective;
    if (name == "random-baseline") return Algorithm::random_baseline;
    throw DataError("unknown algorithm: " + name);
}

SweepSpec sweep_from(const Options& opt) {
    SweepSpec spec;
    spec.dataset = dataset_from(opt);
    spec.algorithm = algo_from(opt.algo);
    spec.levels = opt.levels;
    spec.min_activity = opt.min_activity_list;
    spec.master_seed = opt.seed;
    spec.jobs = opt.jobs;
    spec.baseline_trials = opt.trials;
    spec.cc.max_iterations = opt.max_iterations;
    spec.cc.u_max = opt.u_max;
    std::size_t n_features = canonical_feature_names(opt.overtime).size();
    if (spec.algorithm == Algorithm::tree)
        spec.grid = default_tree_grid(n_features);
    else
        spec.grid = default_forest_grid(n_features, opt.grid != "full");
    return spec;
}

void write_grid_scores(const GridSearchResult& result, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "max_depth,max_features,n_estimators,mean_macro_f1\n";
    char buf[16];
    for (const auto& [point, score] : result.scores) {
        std::snprintf(buf, sizeof(buf), "%.4f", score);
        out << point.max_depth << ',' << point.max_features << ',' << point.n_estimators << ','
            << buf << '\n';
    }
}

void write_ranking(const FeatureRanking& ranking, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "rank,feature,score\n";
    char buf[32];
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6f", ranking.entries[i].second);
        out << i + 1 << ',' << ranking.entries[i].first << ',' << buf << '\n';
    }
}

int cmd_validate(const Options& opt) {
    DatasetSpec dataset = dataset_from(opt);
    IngestOptions ingest{dataset.format, dataset.delimiter};
    auto records = parse_email_log(dataset.log_path, ingest);
    Roster roster = parse_roster(dataset.roster_path, dataset.delimiter);
    FilterStats stats;
    auto filtered = filter_records(records, roster, &stats);
    auto activity = build_activity_index(filtered, dataset.activity);

    auto counts = roster.level_counts();
    std::cout << "dataset: " << dataset.name << '\n';
    std::cout << "roster: total=" << roster.size() << " level1=" << counts[1]
              << " level2=" << counts[2] << " level3=" << counts[3] << '\n';
    std::cout << "records: parsed=" << records.size() << " kept=" << stats.kept
              << " dropped_self_loops=" << stats.dropped_self_loops
              << " dropped_off_roster=" << stats.dropped_off_roster << '\n';

    std::map<std::size_t, std::size_t> histogram;
    for (const auto& [id, level] : roster.levels) histogram[activity.month_count(id)]++;
    std::cout << "activity histogram (active months -> employees):\n";
    for (const auto& [months, employees] : histogram)
        std::cout << "  " << months << " -> " << employees << '\n';
    for (int m = 1; m <= 5; ++m) {
        std::size_t surviving = 0;
        for (const auto& [id, level] : roster.levels)
            if (activity.month_count(id) >= static_cast<std::size_t>(m)) surviving++;
        std::cout << "min_activity=" << m << ": roster=" << surviving << '\n';
    }

    if (!opt.export_network.empty()) {
        Pipeline pipeline = build_pipeline(dataset, opt.min_activity);
        std::ofstream out(opt.export_network, std::ios::binary);
        if (!out) throw DataError("cannot write " + opt.export_network);
        export_edge_list(pipeline.net, out);
        std::cout << "network: " << opt.export_network << '\n';
    }
    return 0;
}

int cmd_features(const Options& opt) {
    DatasetSpec dataset = dataset_from(opt);
    Pipeline pipeline = build_pipeline(dataset, opt.min_activity);
    for (const auto& warning : pipeline.warnings)
        std::cerr << "warning: " << warning << '\n';
    fs::path out_path = opt.out == "results" ? fs::path("features.csv") : fs::path(opt.out);
    if (!out_path.parent_path().empty()) fs::create_directories(out_path.parent_path());
    write_feature_table(pipeline.table, out_path);
    std::cout << out_path.string() << '\n';
    return 0;
}

int cmd_train(const Options& opt) {
    if (opt.algo != "tree" && opt.algo != "forest")
        throw DataError("train expects --algo tree|forest");
    SweepSpec spec = sweep_from(opt);
    spec.min_activity = {opt.min_activity};
    spec.fractions = {1.0};
    if (opt.fraction < 1.0) spec.fractions.push_back(opt.fraction);

    fs::path dir = fs::path(opt.out);
    fs::create_directories(dir);

    ResultTable table = run_supervised_sweep(spec);
    const CellMeta& cell = table.meta[0].back();
    write_ranking(table.rankings[0].gini, dir / "importance_gini.csv");
    write_ranking(table.rankings[0].chi2, dir / "importance_chi2.csv");

    std::optional<HoldoutResult> holdout;
    if (opt.holdout > 0.0) {
        Pipeline pipeline = build_pipeline(spec.dataset, opt.min_activity);
        FeatureTable features = opt.fraction < 1.0
                                    ? select_top_features(pipeline.table,
                                                          table.rankings[0].gini, opt.fraction)
                                    : pipeline.table;
        LabeledMatrix data = to_matrix(features);
        data.y = flatten_labels(data.y, opt.levels);
        ModelKind kind = opt.algo == "tree" ? ModelKind::tree : ModelKind::forest;
        holdout = holdout_evaluate(data, spec.grid, kind, spec.cv_folds, cell.seed, opt.holdout,
                                   spec.smote_k, opt.jobs);
    }

    std::ofstream out(dir / "summary.csv", std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / "summary.csv").string());
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.4f", cell.score);
    out << "key,value\n"
        << "dataset," << spec.dataset.name << '\n'
        << "algorithm," << opt.algo << '\n'
        << "levels," << opt.levels << '\n'
        << "min_activity," << opt.min_activity << '\n'
        << "fraction," << opt.fraction << '\n'
        << "seed," << cell.seed << '\n'
        << "best_params," << cell.params << '\n'
        << "best_cv_macro_f1," << buf << '\n';
    if (holdout) {
        std::snprintf(buf, sizeof(buf), "%.4f", holdout->holdout_score);
        out << "holdout_fraction," << opt.holdout << '\n' << "holdout_macro_f1," << buf << '\n';
    }
    out.close();

    std::cout << (dir / "summary.csv").string() << '\n'
              << (dir / "importance_gini.csv").string() << '\n'
              << (dir / "importance_chi2.csv").string() << '\n';
    return 0;
}

int cmd_collective(const Options& opt) {
    DatasetSpec dataset = dataset_from(opt);
    Pipeline pipeline = build_pipeline(dataset, opt.min_activity);
    UndirectedGraph graph = undirected_projection(pipeline.net);
    fs::path dir = fs::path(opt.out);
    fs::create_directories(dir);
    char buf[16];

    if (!opt.utility.empty()) {
        // single run with pinned hyperparameters
        CcParams params;
        params.utility_feature = opt.utility;
        params.known_fraction = opt.known_fraction;
        params.threshold = opt.threshold > 0 ? opt.threshold : 1;
        params.jaccard_min = opt.jaccard > 0.0 ? opt.jaccard : 0.7;
        params.max_iterations = opt.max_iterations;
        params.u_max = opt.u_max;
        params.levels = opt.levels;
        CcRun run = cc_run(pipeline.table, graph, params, opt.seed);

        std::ofstream transcript(dir / "transcript.csv", std::ios::binary);
        transcript << "iteration,labeled,jaccard\n";
        for (const auto& step : run.transcript) {
            std::snprintf(buf, sizeof(buf), "%.6f", step.jaccard);
            transcript << step.iteration << ',' << step.labeled << ',' << buf << '\n';
        }
        transcript.close();

        std::ofstream out(dir / "summary.csv", std::ios::binary);
        out << "key,value\n"
            << "utility," << params.utility_feature << '\n'
            << "known_fraction," << params.known_fraction << '\n'
            << "threshold," << params.threshold << '\n'
            << "jaccard_min," << params.jaccard_min << '\n'
            << "iterations," << run.iterations << '\n'
            << "converged," << (run.converged ? "true" : "false") << '\n';
        std::snprintf(buf, sizeof(buf), "%.4f",
                      evaluate_cc(run, pipeline.table, opt.levels, CcScope::unknown_only));
        out << "macro_f1_unknown," << buf << '\n';
        std::snprintf(buf, sizeof(buf), "%.4f",
                      evaluate_cc(run, pipeline.table, opt.levels, CcScope::all));
        out << "macro_f1_all," << buf << '\n';
        out.close();
        std::cout << (dir / "summary.csv").string() << '\n'
                  << (dir / "transcript.csv").string() << '\n';
        return 0;
    }

    // full hyperparameter search at this known fraction
    CcSearchSpace space;
    space.max_iterations = opt.max_iterations;
    space.u_max = opt.u_max;
    std::ofstream scores(dir / "scores.csv", std::ios::binary);
    scores << "utility,threshold,jaccard,macro_f1_unknown,macro_f1_all\n";
    double best = -1.0;
    std::string best_params;
    for (const auto& utility : pipeline.table.feature_names) {
        for (int threshold : space.thresholds) {
            for (double jaccard : space.jaccards) {
                CcParams params;
                params.utility_feature = utility;
                params.known_fraction = opt.known_fraction;
                params.threshold = threshold;
                params.jaccard_min = jaccard;
                params.max_iterations = space.max_iterations;
                params.u_max = space.u_max;
                params.levels = opt.levels;
                CcRun run = cc_run(pipeline.table, graph, params, opt.seed);
                double unknown = evaluate_cc(run, pipeline.table, opt.levels,
                                             CcScope::unknown_only);
                double all = evaluate_cc(run, pipeline.table, opt.levels, CcScope::all);
                scores << utility << ',' << threshold << ',';
                std::snprintf(buf, sizeof(buf), "%.2f", jaccard);
                scores << buf << ',';
                std::snprintf(buf, sizeof(buf), "%.4f", unknown);
                scores << buf << ',';
                std::snprintf(buf, sizeof(buf), "%.4f", all);
                scores << buf << '\n';
                if (unknown > best) {
                    best = unknown;
                    std::snprintf(buf, sizeof(buf), "%.2f", jaccard);
                    best_params = "utility=" + utility + " threshold=" +
                                  std::to_string(threshold) + " jaccard=" + buf;
                }
            }
        }
    }
    scores.close();

    std::ofstream out(dir / "summary.csv", std::ios::binary);
    out << "key,value\n"
        << "known_fraction," << opt.known_fraction << '\n'
        << "best_params," << best_params << '\n';
    std::snprintf(buf, sizeof(buf), "%.4f", best);
    out << "best_macro_f1_unknown," << buf << '\n';
    out.close();
    std::cout << (dir / "summary.csv").string() << '\n' << (dir / "scores.csv").string() << '\n';
    return 0;
}

int cmd_sweep(const Options& opt) {
    SweepSpec spec = sweep_from(opt);
    ResultTable table;
    switch (spec.algorithm) {
        case Algorithm::tree:
        case Algorithm::forest: table = run_supervised_sweep(spec); break;
        case Algorithm::collective: table = run_collective_sweep(spec); break;
        case Algorithm::random_baseline: table = run_baseline_sweep(spec); break;
    }
    fs::path dir = emit_results(table, opt.out);
    std::cout << dir.string() << '\n';
    return 0;
}

int cmd_report(const Options& opt) {
    if (opt.algo != "tree" && opt.algo != "forest")
        throw DataError("report expects --algo tree|forest");
    SweepSpec spec = sweep_from(opt);
    spec.min_activity = {opt.min_activity};
    spec.fractions = {1.0};
    ResultTable table = run_supervised_sweep(spec);

    fs::path dir = fs::path(opt.out);
    fs::create_directories(dir);
    write_ranking(table.rankings[0].gini, dir / "importance_gini.csv");
    write_ranking(table.rankings[0].chi2, dir / "importance_chi2.csv");
    std::cout << (dir / "importance_gini.csv").string() << '\n'
              << (dir / "importance_chi2.csv").string() << '\n';
    return 0;
}

void add_dataset_options(CLI::App* cmd, Options& opt) {
    // parsed ahead of CLI11; registered here so they are accepted anywhere
    cmd->add_option_function<std::string>("--config", [](const std::string&) {},
                                          "flat key = value config file");
    cmd->add_option_function<std::string>(
        "--dataset", [](const std::string&) {},
        "config file path, or a name resolved as configs/<name>.conf");
    cmd->add_option("--log", opt.log, "message log (delimited text)");
    cmd->add_option("--roster", opt.roster, "roster file with id, level columns");
    cmd->add_option("--name", opt.name, "dataset name used in output paths");
    cmd->add_option("--format", opt.format, "timestamp format")
        ->check(CLI::IsMember({"iso8601", "epoch"}));
    cmd->add_option("--delimiter", opt.delimiter, "input field delimiter");
    cmd->add_flag("--overtime,!--no-overtime", opt.overtime,
                  "dataset declares the overtime feature");
    cmd->add_option("--activity", opt.activity, "active month rule")
        ->check(CLI::IsMember({"sent", "any"}));
    cmd->add_option("--closeness", opt.closeness, "closeness variant")
        ->check(CLI::IsMember({"scaled", "literal"}));
    cmd->add_option("--paths", opt.paths, "shortest-path mode")
        ->check(CLI::IsMember({"unweighted", "weighted"}));
    cmd->add_option("--cliques", opt.cliques, "clique counting mode")
        ->check(CLI::IsMember({"maximal", "all"}));
}

void add_run_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--levels", opt.levels, "hierarchy levels to recognize")
        ->check(CLI::IsMember({2, 3}));
    cmd->add_option("--seed", opt.seed, "master seed");
    cmd->add_option("--jobs", opt.jobs, "parallel workers");
    cmd->add_option("--out", opt.out, "output file or directory");
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    opt.jobs = std::max(1u, std::thread::hardware_concurrency());

    // config file values become defaults; explicit flags override them
    auto resolve_dataset = [](const std::string& value) -> std::string {
        if (fs::exists(value)) return value;
        fs::path named = fs::path("configs") / (value + ".conf");
        if (fs::exists(named)) return named.string();
        throw DataError("no config file or configs/" + value + ".conf for --dataset " + value);
    };
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        try {
            if (arg == "--config" && i + 1 < argc) {
                apply_config(opt, load_config(argv[i + 1]));
            } else if (arg.rfind("--config=", 0) == 0) {
                apply_config(opt, load_config(arg.substr(9)));
            } else if (arg == "--dataset" && i + 1 < argc) {
                apply_config(opt, load_config(resolve_dataset(argv[i + 1])));
            } else if (arg.rfind("--dataset=", 0) == 0) {
                apply_config(opt, load_config(resolve_dataset(arg.substr(10))));
            }
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 2;
        }
    }

    CLI::App app{"organizational hierarchy reconstruction from email metadata"};
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "ingest and report dataset statistics");
    add_dataset_options(validate, opt);
    validate->add_option("--min-activity", opt.min_activity, "months for --export-network");
    validate->add_option("--export-network", opt.export_network,
                         "write the directed weighted edge list here");

    auto* features = app.add_subcommand("features", "compute the per-employee feature table");
    add_dataset_options(features, opt);
    add_run_options(features, opt);
    features->add_option("--min-activity", opt.min_activity, "minimum active months");

    auto* train = app.add_subcommand("train", "grid-search a classifier on one configuration");
    add_dataset_options(train, opt);
    add_run_options(train, opt);
    train->add_option("--algo", opt.algo, "tree or forest")
        ->check(CLI::IsMember({"tree", "forest"}));
    train->add_option("--min-activity", opt.min_activity, "minimum active months");
    train->add_option("--fraction", opt.fraction, "fraction of top-ranked features")
        ->check(CLI::Range(0.05, 1.0));
    train->add_option("--grid", opt.grid, "hyperparameter grid")
        ->check(CLI::IsMember({"fast", "full"}));
    train->add_option("--holdout", opt.holdout, "held-out fraction for stricter evaluation")
        ->check(CLI::Range(0.0, 0.9));

    auto* collective = app.add_subcommand("collective", "run or search collective classification");
    add_dataset_options(collective, opt);
    add_run_options(collective, opt);
    collective->add_option("--min-activity", opt.min_activity, "minimum active months");
    collective->add_option("--known-fraction", opt.known_fraction, "fraction of revealed labels")
        ->check(CLI::Range(0.01, 1.0));
    collective->add_option("--utility", opt.utility, "utility feature (omit to search)");
    collective->add_option("--threshold", opt.threshold, "majority damping divisor");
    collective->add_option("--jaccard", opt.jaccard, "stop-condition minimum");
    collective->add_option("--u-max", opt.u_max, "tie counter limit");
    collective->add_option("--max-iterations", opt.max_iterations, "iteration cap");

    auto* sweep = app.add_subcommand("sweep", "reproduce a full experiment table");
    add_dataset_options(sweep, opt);
    add_run_options(sweep, opt);
    sweep->add_option("--algo", opt.algo, "tree, forest, collective or random-baseline")
        ->check(CLI::IsMember({"tree", "forest", "collective", "random-baseline"}));
    sweep->add_option("--grid", opt.grid, "hyperparameter grid")
        ->check(CLI::IsMember({"fast", "full"}));
    sweep->add_option("--min-activity-list", opt.min_activity_list, "min activity values");
    sweep->add_option("--trials", opt.trials, "random baseline trials");

    auto* report = app.add_subcommand("report", "feature-importance rankings (gini + chi2)");
    add_dataset_options(report, opt);
    add_run_options(report, opt);
    report->add_option("--algo", opt.algo, "tree or forest")
        ->check(CLI::IsMember({"tree", "forest"}));
    report->add_option("--min-activity", opt.min_activity, "minimum active months");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // usage error
    }

    try {
        if (app.got_subcommand(validate)) return cmd_validate(opt);
        if (app.got_subcommand(features)) return cmd_features(opt);
        if (app.got_subcommand(train)) return cmd_train(opt);
        if (app.got_subcommand(collective)) return cmd_collective(opt);
        if (app.got_subcommand(sweep)) return cmd_sweep(opt);
        if (app.got_subcommand(report)) return cmd_report(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
