#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "orghier/graph.hpp"
#include "orghier/types.hpp"

namespace orghier {

// --- centralities ------------------------------------------------------

std::vector<int> indegree(const SocialNetwork& net);
std::vector<int> outdegree(const SocialNetwork& net);

enum class PathMode { unweighted, weighted };

// Directed shortest-path betweenness, endpoints excluded, unnormalized.
// Weighted mode uses Dijkstra with edge cost 1/w (exploration flag).
std::vector<double> betweenness(const SocialNetwork& net, PathMode paths = PathMode::unweighted);

enum class ClosenessMode { scaled, literal };

// Distances are hop counts into the node. scaled applies the
// Wasserman-Faust reachability correction (r/(N-1)) * (r/sum d); literal
// keeps the whole-graph numerator N and is meaningful on strongly
// connected inputs.
std::vector<double> closeness(const SocialNetwork& net, ClosenessMode mode = ClosenessMode::scaled,
                              PathMode paths = PathMode::unweighted);

struct IterativeResult {
    std::vector<double> values;
    bool converged = true;
    int iterations = 0;
};

// Dominant left eigenvector of the weighted adjacency (in-edge importance),
// power iteration from uniform, L2-normalized per step.
IterativeResult eigenvector_centrality(const SocialNetwork& net, double tolerance = 1e-8,
                                       int max_iterations = 1000);

// Dangling nodes keep d_k = 1 so their mass leaks; the converged vector is
// renormalized to sum 1.
IterativeResult pagerank(const SocialNetwork& net, double alpha = 0.85, double tolerance = 1e-9,
                         int max_iterations = 1000);

struct HitsResult {
    std::vector<double> hub;
    std::vector<double> authority;
    bool converged = true;
    int iterations = 0;
};

HitsResult hits(const SocialNetwork& net, double tolerance = 1e-8, int max_iterations = 1000);

// Local clustering coefficient on the undirected projection; degree < 2 -> 0.
std::vector<double> clustering(const SocialNetwork& net);

// --- clique features ----------------------------------------------------

struct CliqueStats {
    int count = 0;     // maximal cliques containing the node
    int max_size = 1;  // size of the largest one; 1 for reciprocal isolates
};

enum class CliqueMode { maximal, all };

// Bron-Kerbosch with pivoting over the reciprocal projection. Raises
// DataError when the enumeration exceeds work_budget recursion steps.
// CliqueMode::all counts every clique of size >= 2 and is restricted to
// graphs of <= 20 nodes.
std::vector<CliqueStats> clique_stats(const SocialNetwork& net,
                                      CliqueMode mode = CliqueMode::maximal,
                                      std::uint64_t work_budget = 10'000'000);

// --- behavioural features ------------------------------------------------

enum class Direction { sent, received, general };

// Mean Jaccard similarity of the node's neighbor sets across consecutive
// active months (inactive gaps skipped). Nodes active in < 2 months score
// lone_month_value (0 by default).
std::map<std::string, double> neighborhood_variability(std::span<const EmailRecord> records,
                                                       const Roster& roster, Direction direction,
                                                       double lone_month_value = 0.0);

// Distinct Saturdays/Sundays on which the employee sent >= 1 message.
std::map<std::string, int> weekend_count(std::span<const EmailRecord> records);

// Messages sent with local clock time in [16:00, 24:00) or [00:00, 06:00).
std::map<std::string, int> overtime_count(std::span<const EmailRecord> records);

// --- the feature table ----------------------------------------------------

struct FeatureTable {
    std::vector<std::string> ids;            // row keys, ascending
    std::vector<std::string> feature_names;  // canonical order
    std::vector<std::vector<double>> rows;   // ids.size() x feature_names.size()
    std::vector<int> labels;                 // hierarchy level per row

    std::size_t n_rows() const { return ids.size(); }
    std::size_t n_features() const { return feature_names.size(); }
    int feature_index(const std::string& name) const;
};

struct FeatureConfig {
    bool overtime = false;  // manufacturing yes, Enron no
    ClosenessMode closeness = ClosenessMode::scaled;
    PathMode paths = PathMode::unweighted;
    CliqueMode cliques = CliqueMode::maximal;
    double variability_lone_month = 0.0;
    double pagerank_alpha = 0.85;
};

// Canonical feature order; with_overtime appends "overtime" as the 16th name.
const std::vector<std::string>& canonical_feature_names(bool with_overtime);

// warnings, when given, collects non-convergence reports from the iterative
// centralities; their last iterates are still used.
FeatureTable assemble_features(const SocialNetwork& net, std::span<const EmailRecord> records,
                               const Roster& roster, const FeatureConfig& config = {},
                               std::vector<std::string>* warnings = nullptr);

// --- rankings --------------------------------------------------------

struct FeatureRanking {
    std::vector<std::pair<std::string, double>> entries;  // descending score
};

// Normalized impurity decreases from a fitted tree/forest, highest first;
// ties fall back to canonical column order.
FeatureRanking rank_features_gini(std::span<const double> importances,
                                  std::span<const std::string> feature_names);

// Chi-squared statistic between min-max-scaled per-class sums and the class
// prior. Raises DataError on negative feature values.
FeatureRanking rank_features_chi2(const FeatureTable& table);

// Keeps round-half-up(fraction * n_features) top-ranked columns, minimum 1.
FeatureTable select_top_features(const FeatureTable& table, const FeatureRanking& ranking,
                                 double fraction);

// Delimited-text handoff format (comma separated, canonical header, id and
// label columns first).
void write_feature_table(const FeatureTable& table, const std::filesystem::path& path);
FeatureTable read_feature_table(const std::filesystem::path& path);

}  // namespace orghier
