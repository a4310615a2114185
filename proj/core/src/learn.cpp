#include "orghier/learn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <set>

#include "orghier/rng.hpp"

namespace orghier {

LabeledMatrix to_matrix(const FeatureTable& table) {
    LabeledMatrix m;
    m.X = table.rows;
    m.y = table.labels;
    m.feature_names = table.feature_names;
    return m;
}

std::vector<int> flatten_labels(std::span<const int> y, int levels) {
    if (levels != 2 && levels != 3) throw DataError("levels must be 2 or 3");
    std::vector<int> out(y.begin(), y.end());
    if (levels == 2)
        for (int& v : out) v = v <= 2 ? kManagementLabel : kRegularLabel;
    return out;
}

namespace {

std::vector<int> distinct_classes(std::span<const int> y) {
    std::set<int> s(y.begin(), y.end());
    return {s.begin(), s.end()};
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
    return d;
}

}  // namespace

LabeledMatrix smote(const LabeledMatrix& data, int k, std::uint64_t seed, SmoteReport* report) {
    LabeledMatrix out = data;
    if (data.n_rows() == 0) return out;
    auto classes = distinct_classes(data.y);

    std::size_t majority = 0;
    std::vector<std::vector<std::size_t>> members(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (std::size_t i = 0; i < data.n_rows(); ++i)
            if (data.y[i] == classes[c]) members[c].push_back(i);
        majority = std::max(majority, members[c].size());
    }

    std::mt19937_64 rng(seed);
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const auto& rows = members[c];
        std::size_t need = majority - rows.size();
        if (need == 0) continue;
        if (rows.size() == 1) {
            // cannot interpolate a singleton; duplicate it
            if (report) report->duplicated_classes.push_back(classes[c]);
            for (std::size_t s = 0; s < need; ++s) {
                out.X.push_back(data.X[rows[0]]);
                out.y.push_back(classes[c]);
            }
            continue;
        }
        std::size_t kc = std::min<std::size_t>(static_cast<std::size_t>(k), rows.size() - 1);
        // k nearest same-class neighbors per member; ties broken by row index
        std::vector<std::vector<std::size_t>> nearest(rows.size());
        for (std::size_t a = 0; a < rows.size(); ++a) {
            std::vector<std::pair<double, std::size_t>> dist;
            dist.reserve(rows.size() - 1);
            for (std::size_t b = 0; b < rows.size(); ++b) {
                if (a == b) continue;
                dist.emplace_back(squared_distance(data.X[rows[a]], data.X[rows[b]]), rows[b]);
            }
            std::sort(dist.begin(), dist.end());
            for (std::size_t j = 0; j < kc; ++j) nearest[a].push_back(dist[j].second);
        }
        for (std::size_t s = 0; s < need; ++s) {
            std::size_t base = rng_index(rng, rows.size());
            std::size_t neighbor = nearest[base][rng_index(rng, kc)];
            double lambda = rng_unit(rng);
            std::vector<double> row(data.n_features());
            for (std::size_t f = 0; f < row.size(); ++f) {
                double xb = data.X[rows[base]][f];
                row[f] = xb + lambda * (data.X[neighbor][f] - xb);
            }
            out.X.push_back(std::move(row));
            out.y.push_back(classes[c]);
        }
    }
    return out;
}

namespace {

double gini_impurity(std::span<const std::size_t> counts, std::size_t total) {
    double impurity = 1.0;
    for (std::size_t c : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        impurity -= p * p;
    }
    return impurity;
}

}  // namespace

void DecisionTree::fit(const LabeledMatrix& data, const TreeParams& params, std::uint64_t seed) {
    if (data.n_rows() == 0) throw DataError("cannot fit a tree on empty input");
    if (params.max_depth < 1) throw DataError("max_depth must be >= 1");
    if (params.max_features < 1 ||
        params.max_features > static_cast<int>(data.n_features()))
        throw DataError("max_features must be in [1, n_features]");

    nodes_.clear();
    depth_ = 0;
    classes_ = distinct_classes(data.y);
    importances_.assign(data.n_features(), 0.0);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> indices(data.n_rows());
    std::iota(indices.begin(), indices.end(), 0);
    build(data, indices, 0, params, rng, data.n_rows());
}

int DecisionTree::build(const LabeledMatrix& data, std::vector<std::size_t>& indices, int depth,
                        const TreeParams& params, std::mt19937_64& rng, std::size_t total_rows) {
    depth_ = std::max(depth_, depth);

    std::vector<std::size_t> counts(classes_.size(), 0);
    for (std::size_t i : indices) {
        auto cls = std::lower_bound(classes_.begin(), classes_.end(), data.y[i]);
        counts[static_cast<std::size_t>(cls - classes_.begin())]++;
    }
    const std::size_t n = indices.size();
    const double impurity = gini_impurity(counts, n);

    auto make_leaf = [&]() {
        Node leaf;
        leaf.counts = counts;
        nodes_.push_back(std::move(leaf));
        return static_cast<int>(nodes_.size() - 1);
    };

    bool pure = std::count(counts.begin(), counts.end(), std::size_t{0}) + 1 >=
                static_cast<long>(counts.size());
    if (pure || depth >= params.max_depth || n < 2) return make_leaf();

    // feature subsample without replacement, enumerated in ascending order
    std::vector<std::size_t> features(data.n_features());
    std::iota(features.begin(), features.end(), 0);
    for (int f = 0; f < params.max_features; ++f) {
        std::size_t j = f + rng_index(rng, features.size() - static_cast<std::size_t>(f));
        std::swap(features[static_cast<std::size_t>(f)], features[j]);
    }
    features.resize(static_cast<std::size_t>(params.max_features));
    std::sort(features.begin(), features.end());

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_weighted = impurity;
    std::vector<std::pair<double, int>> values(n);  // (value, class index)
    std::vector<std::size_t> left_counts(classes_.size());
    for (std::size_t f : features) {
        for (std::size_t i = 0; i < n; ++i) {
            auto cls = std::lower_bound(classes_.begin(), classes_.end(), data.y[indices[i]]);
            values[i] = {data.X[indices[i]][f], static_cast<int>(cls - classes_.begin())};
        }
        std::sort(values.begin(), values.end());
        if (values.front().first == values.back().first) continue;  // constant in this node

        std::fill(left_counts.begin(), left_counts.end(), 0);
        std::size_t n_left = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left_counts[static_cast<std::size_t>(values[i].second)]++;
            n_left++;
            if (values[i].first == values[i + 1].first) continue;
            double g_left = gini_impurity(left_counts, n_left);
            std::size_t n_right = n - n_left;
            double g_right = 0.0;
            {
                double imp = 1.0;
                for (std::size_t c = 0; c < classes_.size(); ++c) {
                    double p = static_cast<double>(counts[c] - left_counts[c]) /
                               static_cast<double>(n_right);
                    imp -= p * p;
                }
                g_right = imp;
            }
            double weighted = (static_cast<double>(n_left) * g_left +
                               static_cast<double>(n_right) * g_right) /
                              static_cast<double>(n);
            if (weighted < best_weighted - 1e-12) {
                best_weighted = weighted;
                best_feature = static_cast<int>(f);
                best_threshold = (values[i].first + values[i + 1].first) / 2.0;
            }
        }
    }

    if (best_feature < 0) return make_leaf();

    importances_[static_cast<std::size_t>(best_feature)] +=
        static_cast<double>(n) / static_cast<double>(total_rows) * (impurity - best_weighted);

    std::vector<std::size_t> left, right;
    for (std::size_t i : indices) {
        if (data.X[i][static_cast<std::size_t>(best_feature)] <= best_threshold)
            left.push_back(i);
        else
            right.push_back(i);
    }
    indices.clear();
    indices.shrink_to_fit();

    int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[static_cast<std::size_t>(node_index)].feature = best_feature;
    nodes_[static_cast<std::size_t>(node_index)].threshold = best_threshold;
    int l = build(data, left, depth + 1, params, rng, total_rows);
    int r = build(data, right, depth + 1, params, rng, total_rows);
    nodes_[static_cast<std::size_t>(node_index)].left = l;
    nodes_[static_cast<std::size_t>(node_index)].right = r;
    return node_index;
}

std::optional<std::pair<int, double>> DecisionTree::root_split() const {
    if (nodes_.empty() || nodes_[0].feature < 0) return std::nullopt;
    return std::make_pair(nodes_[0].feature, nodes_[0].threshold);
}

int DecisionTree::predict_row(std::span<const double> row) const {
    if (nodes_.empty()) throw DataError("predict called on an unfitted tree");
    std::size_t node = 0;
    while (nodes_[node].feature >= 0) {
        node = static_cast<std::size_t>(
            row[static_cast<std::size_t>(nodes_[node].feature)] <= nodes_[node].threshold
                ? nodes_[node].left
                : nodes_[node].right);
    }
    const auto& counts = nodes_[node].counts;
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c)
        if (counts[c] > counts[best]) best = c;  // ties keep the smaller label
    return classes_[best];
}

std::vector<int> DecisionTree::predict(const std::vector<std::vector<double>>& rows) const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(predict_row(row));
    return out;
}

void RandomForest::fit(const LabeledMatrix& data, const ForestParams& params, std::uint64_t seed) {
    if (data.n_rows() == 0) throw DataError("cannot fit a forest on empty input");
    if (params.n_estimators < 1) throw DataError("n_estimators must be >= 1");
    trees_.assign(static_cast<std::size_t>(params.n_estimators), {});
    classes_ = distinct_classes(data.y);
    importances_.assign(data.n_features(), 0.0);

    for (int t = 0; t < params.n_estimators; ++t) {
        std::uint64_t tree_seed = derive_seed(seed, {0x7265657473ULL, static_cast<std::uint64_t>(t)});
        LabeledMatrix sample;
        const LabeledMatrix* train = &data;
        if (params.bootstrap) {
            std::mt19937_64 rng(derive_seed(seed, {0x626f6f74ULL, static_cast<std::uint64_t>(t)}));
            sample.feature_names = data.feature_names;
            sample.X.reserve(data.n_rows());
            sample.y.reserve(data.n_rows());
            for (std::size_t i = 0; i < data.n_rows(); ++i) {
                std::size_t j = rng_index(rng, data.n_rows());
                sample.X.push_back(data.X[j]);
                sample.y.push_back(data.y[j]);
            }
            train = &sample;
        }
        trees_[static_cast<std::size_t>(t)].fit(*train, params.tree, tree_seed);
        const auto& imp = trees_[static_cast<std::size_t>(t)].importances();
        for (std::size_t f = 0; f < imp.size(); ++f) importances_[f] += imp[f];
    }
}

int RandomForest::predict_row(std::span<const double> row) const {
    if (trees_.empty()) throw DataError("predict called on an unfitted forest");
    std::map<int, int> votes;
    for (const auto& tree : trees_) votes[tree.predict_row(row)]++;
    int best_label = 0, best_votes = -1;
    for (const auto& [label, v] : votes) {
        if (v > best_votes) {  // map iterates ascending: ties keep the smaller label
            best_label = label;
            best_votes = v;
        }
    }
    return best_label;
}

std::vector<int> RandomForest::predict(const std::vector<std::vector<double>>& rows) const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(predict_row(row));
    return out;
}

std::vector<Fold> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed,
                                   int* effective_k) {
    if (k < 2) throw DataError("k must be >= 2");
    auto classes = distinct_classes(y);
    if (classes.size() < 2) throw DataError("stratified folds need >= 2 classes");

    std::size_t smallest = y.size();
    std::vector<std::vector<std::size_t>> members(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == classes[c]) members[c].push_back(i);
        smallest = std::min(smallest, members[c].size());
    }
    int effective = std::min<int>(k, std::max<int>(2, static_cast<int>(smallest)));
    if (effective_k) *effective_k = effective;

    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> fold_members(static_cast<std::size_t>(effective));
    for (std::size_t c = 0; c < classes.size(); ++c) {
        rng_shuffle(rng, members[c]);
        for (std::size_t i = 0; i < members[c].size(); ++i)
            fold_members[i % static_cast<std::size_t>(effective)].push_back(members[c][i]);
    }

    std::vector<Fold> folds(static_cast<std::size_t>(effective));
    for (std::size_t f = 0; f < folds.size(); ++f) {
        folds[f].validation = fold_members[f];
        std::sort(folds[f].validation.begin(), folds[f].validation.end());
        for (std::size_t g = 0; g < folds.size(); ++g) {
            if (g == f) continue;
            folds[f].train.insert(folds[f].train.end(), fold_members[g].begin(),
                                  fold_members[g].end());
        }
        std::sort(folds[f].train.begin(), folds[f].train.end());
    }
    return folds;
}

double macro_f1(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) throw DataError("macro_f1: length mismatch");
    auto classes = distinct_classes(y_true);
    double total = 0.0;
    for (int c : classes) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            if (y_pred[i] == c && y_true[i] == c) tp++;
            if (y_pred[i] == c && y_true[i] != c) fp++;
            if (y_pred[i] != c && y_true[i] == c) fn++;
        }
        double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        if (precision + recall > 0.0) total += 2.0 * precision * recall / (precision + recall);
    }
    return total / static_cast<double>(classes.size());
}

namespace {

std::vector<GridPoint> enumerate_grid(const HyperGrid& grid, ModelKind kind) {
    if (grid.max_depth.empty() || grid.max_features.empty())
        throw DataError("hyperparameter grid must not be empty");
    if (kind == ModelKind::forest && grid.n_estimators.empty())
        throw DataError("forest grid needs n_estimators values");
    std::vector<GridPoint> points;
    for (int depth : grid.max_depth)
        for (int features : grid.max_features) {
            if (kind == ModelKind::tree)
                points.push_back({depth, features, 0});
            else
                for (int estimators : grid.n_estimators)
                    points.push_back({depth, features, estimators});
        }
    return points;
}

LabeledMatrix subset(const LabeledMatrix& data, std::span<const std::size_t> rows) {
    LabeledMatrix out;
    out.feature_names = data.feature_names;
    out.X.reserve(rows.size());
    out.y.reserve(rows.size());
    for (std::size_t i : rows) {
        out.X.push_back(data.X[i]);
        out.y.push_back(data.y[i]);
    }
    return out;
}

double evaluate_point(const LabeledMatrix& data, const std::vector<Fold>& folds,
                      const GridPoint& point, ModelKind kind, std::uint64_t seed,
                      std::size_t point_index, int smote_k) {
    double total = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const Fold& fold = folds[f];
        {
            // leakage guard: folds must stay disjoint
            std::set<std::size_t> train_set(fold.train.begin(), fold.train.end());
            for (std::size_t i : fold.validation)
                if (train_set.count(i))
                    throw DataError("internal error: train/validation folds overlap");
        }
        std::uint64_t fold_seed = derive_seed(seed, {point_index, f});
        LabeledMatrix train = smote(subset(data, fold.train), smote_k, fold_seed);

        LabeledMatrix val = subset(data, fold.validation);
        std::vector<int> predictions;
        if (kind == ModelKind::tree) {
            DecisionTree tree;
            tree.fit(train, {point.max_depth, point.max_features}, derive_seed(fold_seed, {1}));
            predictions = tree.predict(val.X);
        } else {
            RandomForest forest;
            forest.fit(train, {{point.max_depth, point.max_features}, point.n_estimators, true},
                       derive_seed(fold_seed, {1}));
            predictions = forest.predict(val.X);
        }
        total += macro_f1(val.y, predictions);
    }
    return total / static_cast<double>(folds.size());
}

}  // namespace

GridSearchResult grid_search(const LabeledMatrix& data, const HyperGrid& grid, ModelKind kind,
                             int k, std::uint64_t seed, int smote_k, int jobs) {
    auto points = enumerate_grid(grid, kind);
    auto folds = stratified_kfold(data.y, k, derive_seed(seed, {0x666f6c64ULL}));

    std::vector<double> scores(points.size(), 0.0);
    if (jobs <= 1) {
        for (std::size_t p = 0; p < points.size(); ++p)
            scores[p] = evaluate_point(data, folds, points[p], kind, seed, p, smote_k);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                std::size_t p = next.fetch_add(1);
                if (p >= points.size()) break;
                scores[p] = evaluate_point(data, folds, points[p], kind, seed, p, smote_k);
            }
        };
        std::vector<std::future<void>> pool;
        for (int j = 0; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool) f.get();
    }

    GridSearchResult result;
    result.scores.reserve(points.size());
    std::size_t best = 0;
    for (std::size_t p = 0; p < points.size(); ++p) {
        result.scores.emplace_back(points[p], scores[p]);
        if (scores[p] > scores[best]) best = p;
    }
    result.best = points[best];
    result.best_score = scores[best];
    return result;
}

HoldoutResult holdout_evaluate(const LabeledMatrix& data, const HyperGrid& grid, ModelKind kind,
                               int k, std::uint64_t seed, double holdout_fraction, int smote_k,
                               int jobs) {
    if (holdout_fraction <= 0.0 || holdout_fraction >= 1.0)
        throw DataError("holdout fraction must be in (0, 1)");
    auto classes = distinct_classes(data.y);
    std::mt19937_64 rng(derive_seed(seed, {0x686f6c64ULL}));
    std::vector<std::size_t> holdout, train_rows;
    for (int c : classes) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.n_rows(); ++i)
            if (data.y[i] == c) members.push_back(i);
        rng_shuffle(rng, members);
        std::size_t take = static_cast<std::size_t>(
            std::floor(holdout_fraction * static_cast<double>(members.size()) + 0.5));
        take = std::min(take, members.size() - 1);
        for (std::size_t i = 0; i < members.size(); ++i)
            (i < take ? holdout : train_rows).push_back(members[i]);
    }
    std::sort(holdout.begin(), holdout.end());
    std::sort(train_rows.begin(), train_rows.end());

    LabeledMatrix train = subset(data, train_rows);
    HoldoutResult result;
    result.search = grid_search(train, grid, kind, k, seed, smote_k, jobs);

    LabeledMatrix fit_data = smote(train, smote_k, derive_seed(seed, {0x66697421ULL}));
    LabeledMatrix held = subset(data, holdout);
    std::vector<int> predictions;
    if (kind == ModelKind::tree) {
        DecisionTree tree;
        tree.fit(fit_data, {result.search.best.max_depth, result.search.best.max_features},
                 derive_seed(seed, {2}));
        predictions = tree.predict(held.X);
    } else {
        RandomForest forest;
        forest.fit(fit_data,
                   {{result.search.best.max_depth, result.search.best.max_features},
                    result.search.best.n_estimators,
                    true},
                   derive_seed(seed, {2}));
        predictions = forest.predict(held.X);
    }
    result.holdout_score = macro_f1(held.y, predictions);
    return result;
}

double random_baseline(std::span<const int> y, std::uint64_t seed, int trials) {
    if (trials < 1) throw DataError("trials must be >= 1");
    auto classes = distinct_classes(y);
    std::mt19937_64 rng(seed);
    std::vector<int> assigned(y.size());
    double total = 0.0;
    for (int t = 0; t < trials; ++t) {
        for (auto& label : assigned) label = classes[rng_index(rng, classes.size())];
        total += macro_f1(y, assigned);
    }
    return total / static_cast<double>(trials);
}

}  // namespace orghier
