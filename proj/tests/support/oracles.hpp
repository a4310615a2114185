#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "orghier/graph.hpp"
#include "orghier/learn.hpp"

// Independent reference implementations used to pin the production code.
// Spectral oracles go through dense Eigen decompositions instead of power
// iteration; path oracles enumerate shortest paths explicitly.
namespace orghier::oracle {

// Builds a network from integer edges (from, to, count); node ids are
// zero-padded strings so lexicographic order matches index order.
SocialNetwork net_from_edges(std::size_t n,
                             const std::vector<std::tuple<int, int, std::int64_t>>& edges);

// Random digraph helper for property tests; every edge gets a count in
// [1, max_count].
SocialNetwork random_net(std::mt19937_64& rng, std::size_t n, double edge_prob,
                         std::int64_t max_count = 1);

std::vector<double> betweenness(const SocialNetwork& net);
std::vector<double> closeness_scaled(const SocialNetwork& net);
std::vector<double> closeness_literal(const SocialNetwork& net);
std::vector<double> clustering(const SocialNetwork& net);
std::vector<CliqueStats> clique_stats(const SocialNetwork& net);
std::vector<int> indegree(const SocialNetwork& net);
std::vector<int> outdegree(const SocialNetwork& net);

// nullopt when the dominant eigenpair is not simple/Perron, in which case
// power iteration has no well-defined target.
std::optional<std::vector<double>> eigenvector(const SocialNetwork& net);

// Direct linear solve of (I - alpha M^T) p = beta 1, renormalized.
std::vector<double> pagerank(const SocialNetwork& net, double alpha);

struct HitsVectors {
    std::vector<double> hub;
    std::vector<double> authority;
};

// Dominant singular vectors of the weighted adjacency; nullopt when the
// leading singular value is not separated.
std::optional<HitsVectors> hits(const SocialNetwork& net);

struct BestSplit {
    int feature = -1;
    double threshold = 0.0;
    double weighted_impurity = 0.0;
};

// Exhaustive CART split search over all features and midpoint thresholds.
std::optional<BestSplit> best_split(const std::vector<std::vector<double>>& X,
                                    const std::vector<int>& y);

// Synchronous majority-vote propagation from seeds over an undirected graph.
// nullopt when any node ever faces a tie (the equivalence only holds then).
std::optional<std::vector<int>> propagate_majority(const UndirectedGraph& graph,
                                                   const std::vector<int>& seed_labels,
                                                   int max_rounds);

}  // namespace orghier::oracle
