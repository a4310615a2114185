#include "orghier/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <queue>
#include <set>

namespace orghier {

std::vector<int> indegree(const SocialNetwork& net) {
    std::vector<int> deg(net.size(), 0);
    for (int i = 0; i < static_cast<int>(net.size()); ++i)
        for (const auto& e : net.out_edges(i)) deg[static_cast<std::size_t>(e.target)]++;
    return deg;
}

std::vector<int> outdegree(const SocialNetwork& net) {
    std::vector<int> deg(net.size(), 0);
    for (int i = 0; i < static_cast<int>(net.size()); ++i)
        deg[static_cast<std::size_t>(i)] = static_cast<int>(net.out_edges(i).size());
    return deg;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Single-source shortest paths: hop counts (BFS) or 1/w costs (Dijkstra).
// Fills dist, path counts sigma, predecessor lists, and the processing
// order needed by the Brandes accumulation.
struct ShortestPaths {
    std::vector<double> dist;
    std::vector<double> sigma;
    std::vector<std::vector<int>> pred;
    std::vector<int> order;
};

ShortestPaths sssp(const SocialNetwork& net, int source, bool reversed, PathMode paths) {
    const std::size_t n = net.size();
    ShortestPaths sp;
    sp.dist.assign(n, kInf);
    sp.sigma.assign(n, 0.0);
    sp.pred.assign(n, {});
    sp.order.reserve(n);

    std::vector<std::vector<std::pair<int, double>>> adj(n);
    for (int i = 0; i < static_cast<int>(n); ++i) {
        for (const auto& e : net.out_edges(i)) {
            double cost = paths == PathMode::unweighted ? 1.0 : 1.0 / e.weight;
            if (reversed)
                adj[static_cast<std::size_t>(e.target)].push_back({i, cost});
            else
                adj[static_cast<std::size_t>(i)].push_back({e.target, cost});
        }
    }

    sp.dist[static_cast<std::size_t>(source)] = 0.0;
    sp.sigma[static_cast<std::size_t>(source)] = 1.0;

    if (paths == PathMode::unweighted) {
        std::deque<int> queue{source};
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            sp.order.push_back(v);
            for (const auto& [w, cost] : adj[static_cast<std::size_t>(v)]) {
                auto wi = static_cast<std::size_t>(w);
                auto vi = static_cast<std::size_t>(v);
                if (sp.dist[wi] == kInf) {
                    sp.dist[wi] = sp.dist[vi] + 1.0;
                    queue.push_back(w);
                }
                if (sp.dist[wi] == sp.dist[vi] + 1.0) {
                    sp.sigma[wi] += sp.sigma[vi];
                    sp.pred[wi].push_back(v);
                }
            }
        }
        return sp;
    }

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> done(n, 0);
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, v] = heap.top();
        heap.pop();
        auto vi = static_cast<std::size_t>(v);
        if (done[vi]) continue;
        done[vi] = 1;
        sp.order.push_back(v);
        for (const auto& [w, cost] : adj[vi]) {
            auto wi = static_cast<std::size_t>(w);
            double nd = d + cost;
            if (nd < sp.dist[wi] - 1e-12) {
                sp.dist[wi] = nd;
                sp.sigma[wi] = sp.sigma[vi];
                sp.pred[wi] = {v};
                heap.push({nd, w});
            } else if (std::abs(nd - sp.dist[wi]) <= 1e-12) {
                sp.sigma[wi] += sp.sigma[vi];
                sp.pred[wi].push_back(v);
            }
        }
    }
    return sp;
}

}  // namespace

std::vector<double> betweenness(const SocialNetwork& net, PathMode paths) {
    const std::size_t n = net.size();
    std::vector<double> score(n, 0.0);
    std::vector<double> delta(n);
    for (int s = 0; s < static_cast<int>(n); ++s) {
        ShortestPaths sp = sssp(net, s, /*reversed=*/false, paths);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = sp.order.rbegin(); it != sp.order.rend(); ++it) {
            auto wi = static_cast<std::size_t>(*it);
            for (int v : sp.pred[wi]) {
                auto vi = static_cast<std::size_t>(v);
                delta[vi] += sp.sigma[vi] / sp.sigma[wi] * (1.0 + delta[wi]);
            }
            if (*it != s) score[wi] += delta[wi];
        }
    }
    return score;
}

std::vector<double> closeness(const SocialNetwork& net, ClosenessMode mode, PathMode paths) {
    const std::size_t n = net.size();
    std::vector<double> score(n, 0.0);
    for (int v = 0; v < static_cast<int>(n); ++v) {
        ShortestPaths sp = sssp(net, v, /*reversed=*/true, paths);
        double total = 0.0;
        std::size_t reachers = 0;
        for (std::size_t y = 0; y < n; ++y) {
            if (y == static_cast<std::size_t>(v) || sp.dist[y] == kInf) continue;
            total += sp.dist[y];
            reachers++;
        }
        auto vi = static_cast<std::size_t>(v);
        if (reachers == 0 || total == 0.0) {
            score[vi] = 0.0;
        } else if (mode == ClosenessMode::literal) {
            score[vi] = static_cast<double>(n) / total;
        } else {
            double r = static_cast<double>(reachers);
            score[vi] = r / static_cast<double>(n - 1) * (r / total);
        }
    }
    return score;
}

namespace {

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double l2_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

IterativeResult eigenvector_centrality(const SocialNetwork& net, double tolerance,
                                       int max_iterations) {
    const std::size_t n = net.size();
    IterativeResult result;
    if (n == 0) return result;
    if (net.edge_count() == 0) {
        result.values.assign(n, 0.0);
        return result;
    }
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> next(n);
    for (int iter = 1; iter <= max_iterations; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < static_cast<int>(n); ++i)
            for (const auto& e : net.out_edges(i))
                next[static_cast<std::size_t>(e.target)] +=
                    e.weight * x[static_cast<std::size_t>(i)];
        double norm = l2_norm(next);
        if (norm == 0.0) {
            // nilpotent adjacency: the dominant eigenvalue is 0 and the power
            // iteration collapsed; keep the last direction, flag it
            result.values = x;
            result.converged = false;
            result.iterations = iter;
            return result;
        }
        for (double& v : next) v /= norm;
        result.iterations = iter;
        if (l2_diff(next, x) < tolerance) {
            result.values = next;
            return result;
        }
        x = next;
    }
    result.values = x;
    result.converged = false;
    return result;
}

IterativeResult pagerank(const SocialNetwork& net, double alpha, double tolerance,
                         int max_iterations) {
    const std::size_t n = net.size();
    IterativeResult result;
    if (n == 0) return result;
    const double beta = (1.0 - alpha) / static_cast<double>(n);
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    for (int iter = 1; iter <= max_iterations; ++iter) {
        std::fill(next.begin(), next.end(), beta);
        for (int k = 0; k < static_cast<int>(n); ++k) {
            // dangling k has no out edges: with d_k = 1 it contributes nothing
            for (const auto& e : net.out_edges(k))
                next[static_cast<std::size_t>(e.target)] +=
                    alpha * e.weight * p[static_cast<std::size_t>(k)];
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - p[i]);
        p.swap(next);
        result.iterations = iter;
        if (change < tolerance) {
            result.converged = true;
            double sum = 0.0;
            for (double v : p) sum += v;
            for (double& v : p) v /= sum;
            result.values = std::move(p);
            return result;
        }
    }
    result.converged = false;
    double sum = 0.0;
    for (double v : p) sum += v;
    for (double& v : p) v /= sum;
    result.values = std::move(p);
    return result;
}

HitsResult hits(const SocialNetwork& net, double tolerance, int max_iterations) {
    const std::size_t n = net.size();
    HitsResult result;
    result.hub.assign(n, 0.0);
    result.authority.assign(n, 0.0);
    if (n == 0 || net.edge_count() == 0) return result;

    std::vector<double> hub(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> auth(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> new_hub(n), new_auth(n);
    for (int iter = 1; iter <= max_iterations; ++iter) {
        std::fill(new_auth.begin(), new_auth.end(), 0.0);
        for (int k = 0; k < static_cast<int>(n); ++k)
            for (const auto& e : net.out_edges(k))
                new_auth[static_cast<std::size_t>(e.target)] +=
                    e.weight * hub[static_cast<std::size_t>(k)];
        double na = l2_norm(new_auth);
        if (na > 0.0)
            for (double& v : new_auth) v /= na;

        std::fill(new_hub.begin(), new_hub.end(), 0.0);
        for (int k = 0; k < static_cast<int>(n); ++k) {
            double acc = 0.0;
            for (const auto& e : net.out_edges(k))
                acc += e.weight * new_auth[static_cast<std::size_t>(e.target)];
            new_hub[static_cast<std::size_t>(k)] = acc;
        }
        double nh = l2_norm(new_hub);
        if (nh > 0.0)
            for (double& v : new_hub) v /= nh;

        double change = std::max(l2_diff(new_hub, hub), l2_diff(new_auth, auth));
        hub = new_hub;
        auth = new_auth;
        result.iterations = iter;
        if (change < tolerance) {
            result.hub = hub;
            result.authority = auth;
            return result;
        }
    }
    result.hub = hub;
    result.authority = auth;
    result.converged = false;
    return result;
}

std::vector<double> clustering(const SocialNetwork& net) {
    UndirectedGraph g = undirected_projection(net);
    std::vector<double> score(net.size(), 0.0);
    for (int v = 0; v < static_cast<int>(net.size()); ++v) {
        const auto& neighbors = g.adj[static_cast<std::size_t>(v)];
        std::size_t k = neighbors.size();
        if (k < 2) continue;
        std::size_t links = 0;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b)
                if (g.has_edge(neighbors[a], neighbors[b])) links++;
        score[static_cast<std::size_t>(v)] =
            2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
    }
    return score;
}

namespace {

// Fixed-width bitset sized at runtime; enough for the rosters at hand and
// for the enumeration tests.
struct NodeSet {
    std::vector<std::uint64_t> bits;

    explicit NodeSet(std::size_t n) : bits((n + 63) / 64, 0) {}
    void insert(int i) { bits[static_cast<std::size_t>(i) >> 6] |= 1ULL << (i & 63); }
    void erase(int i) { bits[static_cast<std::size_t>(i) >> 6] &= ~(1ULL << (i & 63)); }
    bool test(int i) const { return bits[static_cast<std::size_t>(i) >> 6] >> (i & 63) & 1; }
    bool empty() const {
        for (auto b : bits)
            if (b) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : bits) c += static_cast<std::size_t>(__builtin_popcountll(b));
        return c;
    }
    NodeSet intersect(const NodeSet& other) const {
        NodeSet r = *this;
        for (std::size_t i = 0; i < bits.size(); ++i) r.bits[i] &= other.bits[i];
        return r;
    }
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t blk = 0; blk < bits.size(); ++blk) {
            std::uint64_t b = bits[blk];
            while (b) {
                int i = static_cast<int>(blk * 64) + __builtin_ctzll(b);
                fn(i);
                b &= b - 1;
            }
        }
    }
};

struct CliqueAccumulator {
    std::vector<CliqueStats> stats;
    std::uint64_t steps = 0;
    std::uint64_t budget;

    explicit CliqueAccumulator(std::size_t n, std::uint64_t budget_)
        : stats(n, CliqueStats{0, 1}), budget(budget_) {}

    void step() {
        if (++steps > budget) throw DataError("clique enumeration exceeded work budget");
    }

    void record(const std::vector<int>& clique) {
        if (clique.size() < 2) return;
        for (int v : clique) {
            auto& s = stats[static_cast<std::size_t>(v)];
            s.count++;
            s.max_size = std::max(s.max_size, static_cast<int>(clique.size()));
        }
    }
};

void bron_kerbosch(const std::vector<NodeSet>& adj, std::vector<int>& r, NodeSet p, NodeSet x,
                   CliqueAccumulator& acc) {
    acc.step();
    if (p.empty() && x.empty()) {
        acc.record(r);
        return;
    }
    // pivot: vertex of P union X with most neighbors inside P
    int pivot = -1;
    std::size_t best = 0;
    auto consider = [&](int u) {
        std::size_t c = p.intersect(adj[static_cast<std::size_t>(u)]).count();
        if (pivot < 0 || c > best) {
            pivot = u;
            best = c;
        }
    };
    p.for_each(consider);
    x.for_each(consider);

    NodeSet candidates = p;
    if (pivot >= 0) {
        const NodeSet& pn = adj[static_cast<std::size_t>(pivot)];
        NodeSet trimmed = candidates;
        pn.for_each([&](int u) { trimmed.erase(u); });
        candidates = trimmed;
    }
    std::vector<int> order;
    candidates.for_each([&](int v) { order.push_back(v); });
    for (int v : order) {
        r.push_back(v);
        bron_kerbosch(adj, r, p.intersect(adj[static_cast<std::size_t>(v)]),
                      x.intersect(adj[static_cast<std::size_t>(v)]), acc);
        r.pop_back();
        p.erase(v);
        x.insert(v);
    }
}

void enumerate_all_cliques(const std::vector<NodeSet>& adj, std::vector<int>& r, int next,
                           CliqueAccumulator& acc) {
    acc.step();
    if (r.size() >= 2) acc.record(r);
    for (int v = next; v < static_cast<int>(adj.size()); ++v) {
        bool adjacent_to_all = true;
        for (int u : r) {
            if (!adj[static_cast<std::size_t>(u)].test(v)) {
                adjacent_to_all = false;
                break;
            }
        }
        if (!adjacent_to_all) continue;
        r.push_back(v);
        enumerate_all_cliques(adj, r, v + 1, acc);
        r.pop_back();
    }
}

}  // namespace

std::vector<CliqueStats> clique_stats(const SocialNetwork& net, CliqueMode mode,
                                      std::uint64_t work_budget) {
    UndirectedGraph g = reciprocal_projection(net);
    const std::size_t n = g.size();
    std::vector<NodeSet> adj(n, NodeSet(n));
    for (int v = 0; v < static_cast<int>(n); ++v)
        for (int u : g.adj[static_cast<std::size_t>(v)]) adj[static_cast<std::size_t>(v)].insert(u);

    CliqueAccumulator acc(n, work_budget);
    std::vector<int> r;
    if (mode == CliqueMode::all) {
        if (n > 20) throw DataError("cliques=all is limited to graphs of <= 20 nodes");
        enumerate_all_cliques(adj, r, 0, acc);
    } else {
        NodeSet p(n), x(n);
        for (int v = 0; v < static_cast<int>(n); ++v) p.insert(v);
        bron_kerbosch(adj, r, p, x, acc);
    }
    return acc.stats;
}

namespace {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

std::map<std::string, double> neighborhood_variability(std::span<const EmailRecord> records,
                                                       const Roster& roster, Direction direction,
                                                       double lone_month_value) {
    std::map<std::string, std::map<YearMonth, std::set<std::string>>> contacts;
    for (const auto& r : records) {
        YearMonth ym = year_month_of(r.timestamp);
        if (direction == Direction::sent || direction == Direction::general)
            contacts[r.sender][ym].insert(r.recipient);
        if (direction == Direction::received || direction == Direction::general)
            contacts[r.recipient][ym].insert(r.sender);
    }
    std::map<std::string, double> result;
    for (const auto& [id, level] : roster.levels) {
        auto it = contacts.find(id);
        if (it == contacts.end() || it->second.size() < 2) {
            result[id] = lone_month_value;
            continue;
        }
        // consecutive active months; inactive gaps skipped by construction
        double total = 0.0;
        std::size_t pairs = 0;
        auto prev = it->second.begin();
        for (auto cur = std::next(prev); cur != it->second.end(); ++prev, ++cur) {
            total += jaccard(prev->second, cur->second);
            pairs++;
        }
        result[id] = total / static_cast<double>(pairs);
    }
    return result;
}

std::map<std::string, int> weekend_count(std::span<const EmailRecord> records) {
    std::map<std::string, std::set<std::int64_t>> days;
    for (const auto& r : records) {
        if (!is_weekend(r.timestamp)) continue;
        std::int64_t day = r.timestamp / 86400;
        if (r.timestamp % 86400 < 0) day -= 1;
        days[r.sender].insert(day);
    }
    std::map<std::string, int> result;
    for (const auto& [id, d] : days) result[id] = static_cast<int>(d.size());
    return result;
}

std::map<std::string, int> overtime_count(std::span<const EmailRecord> records) {
    std::map<std::string, int> result;
    for (const auto& r : records) {
        int hour = epoch_to_civil(r.timestamp).hour;
        if (hour >= 16 || hour < 6) result[r.sender]++;
    }
    return result;
}

int FeatureTable::feature_index(const std::string& name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i)
        if (feature_names[i] == name) return static_cast<int>(i);
    return -1;
}

const std::vector<std::string>& canonical_feature_names(bool with_overtime) {
    static const std::vector<std::string> base = {
        "indegree",  "outdegree",    "betweenness",  "closeness",   "eigenvector",
        "pagerank",  "hub",          "authority",    "clustering",  "clique_count",
        "clique_max", "var_sent",    "var_received", "var_general", "weekends"};
    static const std::vector<std::string> extended = [] {
        std::vector<std::string> v = base;
        v.push_back("overtime");
        return v;
    }();
    return with_overtime ? extended : base;
}

FeatureTable assemble_features(const SocialNetwork& net, std::span<const EmailRecord> records,
                               const Roster& roster, const FeatureConfig& config,
                               std::vector<std::string>* warnings) {
    if (roster.empty()) throw DataError("cannot assemble features for an empty roster");

    const std::size_t n = net.size();
    FeatureTable table;
    table.ids = net.node_ids();
    table.feature_names = canonical_feature_names(config.overtime);
    table.labels.reserve(n);
    for (const auto& id : table.ids) table.labels.push_back(roster.levels.at(id));

    auto in_deg = indegree(net);
    auto out_deg = outdegree(net);
    auto betw = betweenness(net, config.paths);
    auto close = closeness(net, config.closeness, config.paths);
    auto eig = eigenvector_centrality(net);
    auto pr = pagerank(net, config.pagerank_alpha);
    auto h = hits(net);
    if (warnings) {
        if (!eig.converged)
            warnings->push_back("eigenvector centrality did not converge after " +
                                std::to_string(eig.iterations) + " iterations");
        if (!pr.converged) warnings->push_back("pagerank did not converge");
        if (!h.converged) warnings->push_back("hits did not converge");
    }
    auto clus = clustering(net);
    auto cliques = clique_stats(net, config.cliques);
    auto var_sent =
        neighborhood_variability(records, roster, Direction::sent, config.variability_lone_month);
    auto var_recv = neighborhood_variability(records, roster, Direction::received,
                                             config.variability_lone_month);
    auto var_gen = neighborhood_variability(records, roster, Direction::general,
                                            config.variability_lone_month);
    auto weekends = weekend_count(records);
    std::map<std::string, int> overtime;
    if (config.overtime) overtime = overtime_count(records);

    auto lookup_int = [](const std::map<std::string, int>& m, const std::string& id) {
        auto it = m.find(id);
        return it == m.end() ? 0.0 : static_cast<double>(it->second);
    };

    table.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& id = table.ids[i];
        std::vector<double> row = {static_cast<double>(in_deg[i]),
                                   static_cast<double>(out_deg[i]),
                                   betw[i],
                                   close[i],
                                   eig.values[i],
                                   pr.values[i],
                                   h.hub[i],
                                   h.authority[i],
                                   clus[i],
                                   static_cast<double>(cliques[i].count),
                                   static_cast<double>(cliques[i].max_size),
                                   var_sent.at(id),
                                   var_recv.at(id),
                                   var_gen.at(id),
                                   lookup_int(weekends, id)};
        if (config.overtime) row.push_back(lookup_int(overtime, id));
        table.rows.push_back(std::move(row));
    }
    return table;
}

FeatureRanking rank_features_gini(std::span<const double> importances,
                                  std::span<const std::string> feature_names) {
    if (importances.size() != feature_names.size())
        throw DataError("gini ranking needs one importance per feature (unfitted model?)");
    double total = 0.0;
    for (double v : importances) total += v;
    FeatureRanking ranking;
    ranking.entries.reserve(importances.size());
    for (std::size_t i = 0; i < importances.size(); ++i)
        ranking.entries.emplace_back(feature_names[i], total > 0.0 ? importances[i] / total : 0.0);
    std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranking;
}

FeatureRanking rank_features_chi2(const FeatureTable& table) {
    const std::size_t n = table.n_rows();
    std::vector<int> classes;
    for (int label : table.labels)
        if (std::find(classes.begin(), classes.end(), label) == classes.end())
            classes.push_back(label);
    std::sort(classes.begin(), classes.end());

    FeatureRanking ranking;
    for (std::size_t f = 0; f < table.n_features(); ++f) {
        double lo = kInf, hi = -kInf;
        for (std::size_t i = 0; i < n; ++i) {
            double v = table.rows[i][f];
            if (v < 0.0)
                throw DataError("chi-squared ranking requires non-negative features; '" +
                                table.feature_names[f] + "' is negative");
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double span = hi - lo;
        double statistic = 0.0;
        if (span > 0.0) {
            std::map<int, double> observed;
            std::map<int, std::size_t> class_size;
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double scaled = (table.rows[i][f] - lo) / span;
                observed[table.labels[i]] += scaled;
                class_size[table.labels[i]]++;
                total += scaled;
            }
            if (total > 0.0) {
                for (int c : classes) {
                    double expected =
                        total * static_cast<double>(class_size[c]) / static_cast<double>(n);
                    double diff = observed[c] - expected;
                    statistic += diff * diff / expected;
                }
            }
        }
        ranking.entries.emplace_back(table.feature_names[f], statistic);
    }
    std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return ranking;
}

FeatureTable select_top_features(const FeatureTable& table, const FeatureRanking& ranking,
                                 double fraction) {
    if (fraction <= 0.0 || fraction > 1.0) throw DataError("feature fraction must be in (0, 1]");
    std::size_t keep = static_cast<std::size_t>(
        std::floor(fraction * static_cast<double>(table.n_features()) + 0.5));
    keep = std::max<std::size_t>(1, std::min(keep, table.n_features()));

    std::set<std::string> selected;
    for (std::size_t i = 0; i < keep; ++i) selected.insert(ranking.entries[i].first);

    FeatureTable out;
    out.ids = table.ids;
    out.labels = table.labels;
    std::vector<std::size_t> cols;
    for (std::size_t f = 0; f < table.n_features(); ++f) {
        if (selected.count(table.feature_names[f])) {
            out.feature_names.push_back(table.feature_names[f]);
            cols.push_back(f);
        }
    }
    out.rows.reserve(table.n_rows());
    for (const auto& row : table.rows) {
        std::vector<double> r;
        r.reserve(cols.size());
        for (std::size_t c : cols) r.push_back(row[c]);
        out.rows.push_back(std::move(r));
    }
    return out;
}

void write_feature_table(const FeatureTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write feature table: " + path.string());
    out << "id,label";
    for (const auto& name : table.feature_names) out << ',' << name;
    out << '\n';
    char buf[40];
    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        out << table.ids[i] << ',' << table.labels[i];
        for (double v : table.rows[i]) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

FeatureTable read_feature_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open feature table: " + path.string());
    FeatureTable table;
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty feature table: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = 0;
    std::vector<std::string> header;
    while (true) {
        std::size_t pos = line.find(',', start);
        header.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    if (header.size() < 3 || header[0] != "id" || header[1] != "label")
        throw DataError("feature table header must start with id,label: " + path.string());
    table.feature_names.assign(header.begin() + 2, header.end());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        start = 0;
        while (true) {
            std::size_t pos = line.find(',', start);
            fields.push_back(line.substr(start, pos == std::string::npos ? pos : pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (fields.size() != header.size())
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": wrong number of columns");
        table.ids.push_back(fields[0]);
        table.labels.push_back(std::stoi(fields[1]));
        std::vector<double> row;
        row.reserve(fields.size() - 2);
        for (std::size_t i = 2; i < fields.size(); ++i) row.push_back(std::stod(fields[i]));
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace orghier
