#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lint/collector.hpp"
#include "lint/errors.hpp"
#include "lint/wire.hpp"

namespace lint::sim {

using wire::SwitchId;

struct Edge {
    SwitchId a = 0;
    SwitchId b = 0;
    double latency = 0.0;  // seconds
};

// Undirected weighted topology. Node IDs are positive switch IDs; parallel
// edges and self-loops are rejected.
class Topology {
public:
    Topology() = default;
    explicit Topology(const std::vector<Edge>& edges);

    // Plain-text format: one edge per line, "node_a node_b latency_seconds";
    // '#' starts a comment.
    static Topology load(const std::string& path);
    static Topology parse(const std::string& text);

    const std::set<SwitchId>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    bool has_node(SwitchId n) const { return nodes_.count(n) > 0; }
    bool has_edge(SwitchId a, SwitchId b) const;
    double latency(SwitchId a, SwitchId b) const;

    // Copy with the given undirected links removed.
    Topology without_links(
        const std::vector<std::pair<SwitchId, SwitchId>>& links) const;

    collect::Adjacency adjacency() const;

    // Shortest path by total latency, src and dst inclusive. Ties break to
    // the lexicographically smallest node-ID sequence. Throws Unreachable.
    std::vector<SwitchId> route(SwitchId src, SwitchId dst) const;

private:
    void add_edge(const Edge& e);

    std::set<SwitchId> nodes_;
    std::vector<Edge> edges_;
    std::map<SwitchId, std::map<SwitchId, double>> adj_;
};

}  // namespace lint::sim
