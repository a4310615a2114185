#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "orghier/types.hpp"

namespace orghier {

// Directed weighted social network. Nodes are the roster ids in ascending
// order; edge weight w_ij = count_ij / out_total_i, so every sender's
// outgoing weights sum to 1. Receive-only nodes stay in the graph with no
// outgoing edges.
class SocialNetwork {
  public:
    struct OutEdge {
        int target;
        std::int64_t count;
        double weight;
    };

    static SocialNetwork build(std::span<const EmailRecord> records, const Roster& roster);

    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& node_ids() const { return ids_; }
    const std::string& id_of(int index) const { return ids_[static_cast<std::size_t>(index)]; }
    int index_of(const std::string& id) const;

    const std::vector<OutEdge>& out_edges(int node) const {
        return out_[static_cast<std::size_t>(node)];
    }
    std::int64_t out_total(int node) const { return out_totals_[static_cast<std::size_t>(node)]; }

    bool has_edge(int from, int to) const;
    std::size_t edge_count() const { return edge_count_; }

  private:
    std::vector<std::string> ids_;
    std::vector<std::vector<OutEdge>> out_;  // sorted by target
    std::vector<std::int64_t> out_totals_;
    std::size_t edge_count_ = 0;
};

// Symmetric unweighted graph over the same node indexing; used for the
// undirected and reciprocal projections.
struct UndirectedGraph {
    std::vector<std::vector<int>> adj;  // sorted neighbor lists, no self loops

    std::size_t size() const { return adj.size(); }
    std::size_t degree(int node) const { return adj[static_cast<std::size_t>(node)].size(); }
    bool has_edge(int a, int b) const;
    std::size_t edge_count() const;
};

// Edge {i,j} present iff i->j or j->i exists.
UndirectedGraph undirected_projection(const SocialNetwork& net);

// Edge {i,j} present iff both i->j and j->i exist. Cliques live here.
UndirectedGraph reciprocal_projection(const SocialNetwork& net);

// One line per directed edge: "<from_id> <to_id> <weight> <count>".
void export_edge_list(const SocialNetwork& net, std::ostream& out);

}  // namespace orghier
