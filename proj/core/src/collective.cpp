#include "orghier/collective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "orghier/learn.hpp"

namespace orghier {

namespace {

int class_index(const std::vector<int>& classes, int label) {
    auto it = std::lower_bound(classes.begin(), classes.end(), label);
    return static_cast<int>(it - classes.begin());
}

// effective count = num / den; exact integer cross-multiplication
bool rational_less(long long a_num, long long a_den, long long b_num, long long b_den) {
    return a_num * b_den < b_num * a_den;
}

bool rational_equal(long long a_num, long long a_den, long long b_num, long long b_den) {
    return a_num * b_den == b_num * a_den;
}

}  // namespace

CcState seed_known(const FeatureTable& table, const CcParams& params, std::uint64_t /*seed*/) {
    if (table.n_rows() == 0) throw DataError("cannot seed an empty table");
    if (params.known_fraction <= 0.0 || params.known_fraction > 1.0)
        throw DataError("known_fraction must be in (0, 1]");
    if (params.threshold < 1) throw DataError("threshold must be >= 1");
    int utility = table.feature_index(params.utility_feature);
    if (utility < 0)
        throw DataError("unknown utility feature '" + params.utility_feature + "'");

    std::vector<int> truth = flatten_labels(table.labels, params.levels);

    CcState state;
    state.labels.assign(table.n_rows(), 0);
    state.known.assign(table.n_rows(), 0);
    state.seed.assign(table.n_rows(), 0);
    state.tie_counter.assign(table.n_rows(), 0);

    std::set<int> classes(truth.begin(), truth.end());
    state.classes.assign(classes.begin(), classes.end());
    state.counts.assign(table.n_rows(),
                        std::vector<long long>(state.classes.size(), 0));

    std::vector<std::size_t> class_sizes(state.classes.size(), 0);
    for (int label : truth) class_sizes[static_cast<std::size_t>(class_index(state.classes, label))]++;
    std::size_t best = 0;
    for (std::size_t c = 1; c < class_sizes.size(); ++c)
        if (class_sizes[c] > class_sizes[best]) best = c;
    state.majority_label = state.classes[best];

    for (std::size_t c = 0; c < state.classes.size(); ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (truth[i] == state.classes[c]) members.push_back(i);
        if (members.empty()) throw DataError("class without members during seeding");
        // descending utility; ascending node id breaks ties
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            double ua = table.rows[a][static_cast<std::size_t>(utility)];
            double ub = table.rows[b][static_cast<std::size_t>(utility)];
            if (ua != ub) return ua > ub;
            return table.ids[a] < table.ids[b];
        });
        auto reveal = static_cast<std::size_t>(std::ceil(
            params.known_fraction * static_cast<double>(members.size()) - 1e-9));
        reveal = std::min(std::max<std::size_t>(reveal, 1), members.size());
        for (std::size_t i = 0; i < reveal; ++i) {
            state.labels[members[i]] = state.classes[c];
            state.known[members[i]] = 1;
            state.seed[members[i]] = 1;
        }
    }
    return state;
}

void cc_iterate(CcState& state, const UndirectedGraph& graph, const CcParams& params) {
    state.iteration++;
    if (!params.cumulative_counters)
        for (auto& c : state.counts) std::fill(c.begin(), c.end(), 0);

    // message passing: labeled -> unlabeled along undirected edges
    for (std::size_t i = 0; i < state.labels.size(); ++i) {
        if (!state.known[i]) continue;
        int ci = class_index(state.classes, state.labels[i]);
        for (int j : graph.adj[i])
            if (!state.known[static_cast<std::size_t>(j)])
                state.counts[static_cast<std::size_t>(j)][static_cast<std::size_t>(ci)]++;
    }

    // label update after all messages have been sent
    const int majority_index = class_index(state.classes, state.majority_label);
    for (std::size_t j = 0; j < state.labels.size(); ++j) {
        if (state.known[j]) continue;
        const auto& counts = state.counts[j];
        bool any = std::any_of(counts.begin(), counts.end(), [](long long c) { return c > 0; });
        if (!any) continue;

        auto den_of = [&](std::size_t c) {
            return static_cast<long long>(static_cast<int>(c) == majority_index ? params.threshold
                                                                                : 1);
        };
        std::size_t argmax = 0;
        for (std::size_t c = 1; c < counts.size(); ++c)
            if (rational_less(counts[argmax], den_of(argmax), counts[c], den_of(c))) argmax = c;
        std::vector<std::size_t> tied;
        for (std::size_t c = 0; c < counts.size(); ++c)
            if (rational_equal(counts[c], den_of(c), counts[argmax], den_of(argmax)))
                tied.push_back(c);

        if (tied.size() == 1) {
            state.labels[j] = state.classes[tied[0]];
            state.known[j] = 1;
            state.tie_counter[j] = 0;
        } else {
            state.tie_counter[j]++;
            if (state.tie_counter[j] > params.u_max) {
                // highest hierarchy position = smallest level among the tied max
                state.labels[j] = state.classes[tied[0]];
                state.known[j] = 1;
                state.tie_counter[j] = 0;
            }
        }
    }
}

CcRun cc_run(const FeatureTable& table, const UndirectedGraph& graph, const CcParams& params,
             std::uint64_t seed) {
    if (graph.size() != table.n_rows())
        throw DataError("graph and feature table disagree on node count");
    CcState state = seed_known(table, params, seed);

    CcRun run;
    run.seed = state.seed;
    std::vector<int> previous = state.labels;
    for (int iter = 0; iter < params.max_iterations; ++iter) {
        cc_iterate(state, graph, params);

        std::size_t labeled = 0, prev_labeled = 0, stable = 0;
        for (std::size_t i = 0; i < state.labels.size(); ++i) {
            if (state.labels[i] != 0) labeled++;
            if (previous[i] != 0) prev_labeled++;
            if (previous[i] != 0 && previous[i] == state.labels[i]) stable++;
        }
        std::size_t unions = labeled + prev_labeled - stable;
        double jaccard =
            unions == 0 ? 1.0 : static_cast<double>(stable) / static_cast<double>(unions);
        run.transcript.push_back({state.iteration, labeled, jaccard});

        if (jaccard > params.jaccard_min && labeled == state.labels.size()) {
            run.converged = true;
            break;
        }
        previous = state.labels;
    }
    run.iterations = state.iteration;

    run.labels = state.labels;
    for (auto& label : run.labels)
        if (label == 0) label = state.majority_label;  // unreachable nodes
    return run;
}

double evaluate_cc(const CcRun& run, const FeatureTable& table, int levels, CcScope scope) {
    std::vector<int> truth = flatten_labels(table.labels, levels);
    std::vector<int> scoped_truth, scoped_pred;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (scope == CcScope::unknown_only && run.seed[i]) continue;
        scoped_truth.push_back(truth[i]);
        scoped_pred.push_back(run.labels[i]);
    }
    if (scoped_truth.empty()) return 1.0;  // nothing was hidden
    return macro_f1(scoped_truth, scoped_pred);
}

}  // namespace orghier
