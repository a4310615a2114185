#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orghier/features.hpp"
#include "orghier/graph.hpp"

namespace orghier {

struct CcParams {
    std::string utility_feature = "indegree";
    double known_fraction = 0.5;
    int threshold = 1;       // divisor for the majority class's counts
    double jaccard_min = 0.7;
    int max_iterations = 100;
    int u_max = 2;
    int levels = 2;
    bool cumulative_counters = false;  // keep counters across iterations
};

struct CcState {
    std::vector<int> labels;          // 0 = unlabeled
    std::vector<char> known;          // in V^L
    std::vector<char> seed;           // revealed at start; never changes
    std::vector<int> tie_counter;     // u per node
    std::vector<std::vector<long long>> counts;  // per node, per class index
    std::vector<int> classes;         // ascending flattened labels
    int majority_label = 0;           // class with the largest true count
    int iteration = 0;
};

// Reveals the top ceil(known_fraction * class_size) nodes of each true class
// by utility value; utility ties go to the smaller node id. The seed argument
// is unused by the deterministic rule but kept so future randomized seeding
// stays API-compatible.
CcState seed_known(const FeatureTable& table, const CcParams& params, std::uint64_t seed);

// One message-passing round of the label-propagation loop. Counters are
// gathered for every labeled->unlabeled undirected edge first; label updates
// apply afterwards, so node order cannot affect the result. Majority-class
// counts are damped by params.threshold using exact rational comparison.
void cc_iterate(CcState& state, const UndirectedGraph& graph, const CcParams& params);

struct CcIterationLog {
    int iteration = 0;
    std::size_t labeled = 0;
    double jaccard = 0.0;
};

struct CcRun {
    std::vector<int> labels;   // complete: unreached nodes fall back to the majority class
    std::vector<char> seed;
    int iterations = 0;
    bool converged = false;
    std::vector<CcIterationLog> transcript;
};

// Repeats cc_iterate until the Jaccard similarity of consecutive assignments
// exceeds jaccard_min with every node labeled, or max_iterations is hit.
CcRun cc_run(const FeatureTable& table, const UndirectedGraph& graph, const CcParams& params,
             std::uint64_t seed);

enum class CcScope { unknown_only, all };

// Macro-F1 of the final assignment against the true (flattened) labels,
// restricted to the initially-unlabeled nodes by default.
double evaluate_cc(const CcRun& run, const FeatureTable& table, int levels,
                   CcScope scope = CcScope::unknown_only);

}  // namespace orghier
