#include "orghier/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace orghier {

SocialNetwork SocialNetwork::build(std::span<const EmailRecord> records, const Roster& roster) {
    SocialNetwork net;
    net.ids_.reserve(roster.size());
    for (const auto& [id, level] : roster.levels) net.ids_.push_back(id);  // map is sorted

    std::map<std::string, int> index;
    for (std::size_t i = 0; i < net.ids_.size(); ++i)
        index.emplace(net.ids_[i], static_cast<int>(i));

    std::vector<std::map<int, std::int64_t>> counts(net.ids_.size());
    for (const auto& r : records) {
        auto si = index.find(r.sender);
        auto ri = index.find(r.recipient);
        if (si == index.end() || ri == index.end() || si->second == ri->second) continue;
        counts[static_cast<std::size_t>(si->second)][ri->second]++;
    }

    net.out_.resize(net.ids_.size());
    net.out_totals_.assign(net.ids_.size(), 0);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        std::int64_t total = 0;
        for (const auto& [j, c] : counts[i]) total += c;
        net.out_totals_[i] = total;
        net.out_[i].reserve(counts[i].size());
        for (const auto& [j, c] : counts[i]) {
            net.out_[i].push_back({j, c, static_cast<double>(c) / static_cast<double>(total)});
            net.edge_count_++;
        }
    }
    return net;
}

int SocialNetwork::index_of(const std::string& id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return -1;
    return static_cast<int>(it - ids_.begin());
}

bool SocialNetwork::has_edge(int from, int to) const {
    const auto& edges = out_[static_cast<std::size_t>(from)];
    auto it = std::lower_bound(edges.begin(), edges.end(), to,
                               [](const OutEdge& e, int t) { return e.target < t; });
    return it != edges.end() && it->target == to;
}

bool UndirectedGraph::has_edge(int a, int b) const {
    const auto& n = adj[static_cast<std::size_t>(a)];
    return std::binary_search(n.begin(), n.end(), b);
}

std::size_t UndirectedGraph::edge_count() const {
    std::size_t total = 0;
    for (const auto& n : adj) total += n.size();
    return total / 2;
}

UndirectedGraph undirected_projection(const SocialNetwork& net) {
    UndirectedGraph g;
    g.adj.resize(net.size());
    for (int i = 0; i < static_cast<int>(net.size()); ++i) {
        for (const auto& e : net.out_edges(i)) {
            g.adj[static_cast<std::size_t>(i)].push_back(e.target);
            g.adj[static_cast<std::size_t>(e.target)].push_back(i);
        }
    }
    for (auto& n : g.adj) {
        std::sort(n.begin(), n.end());
        n.erase(std::unique(n.begin(), n.end()), n.end());
    }
    return g;
}

UndirectedGraph reciprocal_projection(const SocialNetwork& net) {
    UndirectedGraph g;
    g.adj.resize(net.size());
    for (int i = 0; i < static_cast<int>(net.size()); ++i) {
        for (const auto& e : net.out_edges(i)) {
            if (e.target > i && net.has_edge(e.target, i)) {
                g.adj[static_cast<std::size_t>(i)].push_back(e.target);
                g.adj[static_cast<std::size_t>(e.target)].push_back(i);
            }
        }
    }
    for (auto& n : g.adj) std::sort(n.begin(), n.end());
    return g;
}

void export_edge_list(const SocialNetwork& net, std::ostream& out) {
    char buf[64];
    for (int i = 0; i < static_cast<int>(net.size()); ++i) {
        for (const auto& e : net.out_edges(i)) {
            std::snprintf(buf, sizeof(buf), "%.9f", e.weight);
            out << net.id_of(i) << ' ' << net.id_of(e.target) << ' ' << buf << ' ' << e.count
                << '\n';
        }
    }
}

}  // namespace orghier
