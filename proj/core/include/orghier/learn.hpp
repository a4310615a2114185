#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "orghier/features.hpp"
#include "orghier/types.hpp"

namespace orghier {

struct LabeledMatrix {
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    std::vector<std::string> feature_names;

    std::size_t n_rows() const { return X.size(); }
    std::size_t n_features() const { return X.empty() ? feature_names.size() : X[0].size(); }
};

LabeledMatrix to_matrix(const FeatureTable& table);

constexpr int kManagementLabel = 1;
constexpr int kRegularLabel = 2;

// levels=3 keeps {1,2,3}; levels=2 maps {1,2} -> management, {3} -> regular.
std::vector<int> flatten_labels(std::span<const int> y, int levels);

struct SmoteReport {
    std::vector<int> duplicated_classes;  // classes with a single sample
};

// Upsamples every class to the majority size. Synthetics interpolate between
// a class member and one of its k nearest same-class neighbors; originals are
// preserved verbatim at the front of the output.
LabeledMatrix smote(const LabeledMatrix& data, int k, std::uint64_t seed,
                    SmoteReport* report = nullptr);

struct TreeParams {
    int max_depth = 1;
    int max_features = 1;
};

class DecisionTree {
  public:
    void fit(const LabeledMatrix& data, const TreeParams& params, std::uint64_t seed);

    int predict_row(std::span<const double> row) const;
    std::vector<int> predict(const std::vector<std::vector<double>>& rows) const;

    // Raw weighted impurity decreases, one per feature.
    const std::vector<double>& importances() const { return importances_; }
    int depth() const { return depth_; }
    bool fitted() const { return !nodes_.empty(); }
    const std::vector<int>& classes() const { return classes_; }

    // (feature, threshold) of the root, or nullopt for a leaf-only tree.
    std::optional<std::pair<int, double>> root_split() const;

  private:
    struct Node {
        int feature = -1;  // -1 for leaves
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::vector<std::size_t> counts;  // per class, leaves only
    };

    int build(const LabeledMatrix& data, std::vector<std::size_t>& indices, int depth,
              const TreeParams& params, std::mt19937_64& rng, std::size_t total_rows);

    std::vector<Node> nodes_;
    std::vector<int> classes_;
    std::vector<double> importances_;
    int depth_ = 0;
};

struct ForestParams {
    TreeParams tree;
    int n_estimators = 1;
    bool bootstrap = true;
};

class RandomForest {
  public:
    void fit(const LabeledMatrix& data, const ForestParams& params, std::uint64_t seed);

    // Plurality vote; ties go to the smaller (higher-hierarchy) label.
    int predict_row(std::span<const double> row) const;
    std::vector<int> predict(const std::vector<std::vector<double>>& rows) const;

    const std::vector<double>& importances() const { return importances_; }
    const std::vector<DecisionTree>& trees() const { return trees_; }
    bool fitted() const { return !trees_.empty(); }

  private:
    std::vector<DecisionTree> trees_;
    std::vector<double> importances_;
    std::vector<int> classes_;
};

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

// Per-class round-robin dealing after a seeded shuffle; per-class fold sizes
// differ by at most one. k is reduced to the smallest class size (floor 2)
// when a class is too small; the effective value is reported when asked.
std::vector<Fold> stratified_kfold(std::span<const int> y, int k, std::uint64_t seed,
                                   int* effective_k = nullptr);

// Unweighted mean F1 over the classes present in y_true.
double macro_f1(std::span<const int> y_true, std::span<const int> y_pred);

enum class ModelKind { tree, forest };

struct HyperGrid {
    std::vector<int> max_depth;
    std::vector<int> max_features;
    std::vector<int> n_estimators;  // ignored for ModelKind::tree
};

struct GridPoint {
    int max_depth = 0;
    int max_features = 0;
    int n_estimators = 0;  // 0 for plain trees

    bool operator==(const GridPoint&) const = default;
};

struct GridSearchResult {
    GridPoint best;
    double best_score = 0.0;
    std::vector<std::pair<GridPoint, double>> scores;  // enumeration order
};

// 5-fold CV per grid point with SMOTE fit on each training fold only;
// returns the argmax mean macro-F1 (ties to the earlier point).
GridSearchResult grid_search(const LabeledMatrix& data, const HyperGrid& grid, ModelKind kind,
                             int k, std::uint64_t seed, int smote_k = 5, int jobs = 1);

struct HoldoutResult {
    GridSearchResult search;       // on the training portion
    double holdout_score = 0.0;    // winner refit, scored on the held-out rows
};

HoldoutResult holdout_evaluate(const LabeledMatrix& data, const HyperGrid& grid, ModelKind kind,
                               int k, std::uint64_t seed, double holdout_fraction,
                               int smote_k = 5, int jobs = 1);

// Mean macro-F1 of uniformly random label assignments over the task's classes.
double random_baseline(std::span<const int> y, std::uint64_t seed, int trials);

}  // namespace orghier
