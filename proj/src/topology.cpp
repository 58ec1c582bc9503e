#include "lint/topology.hpp"

#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

namespace lint::sim {

Topology::Topology(const std::vector<Edge>& edges) {
    for (const Edge& e : edges) add_edge(e);
}

void Topology::add_edge(const Edge& e) {
    if (e.a == e.b)
        throw ConfigError("topology.edges",
                          "self-loop at node " + std::to_string(e.a));
    if (e.a < 1 || e.b < 1 || e.a > wire::SlotValue::kMaxSwitchId ||
        e.b > wire::SlotValue::kMaxSwitchId)
        throw ConfigError("topology.edges", "node id out of switch-id range");
    if (!(e.latency > 0.0))
        throw ConfigError("topology.edges",
                          "latency must be > 0 on edge " + std::to_string(e.a) +
                              "-" + std::to_string(e.b));
    if (adj_[e.a].count(e.b))
        throw ConfigError("topology.edges",
                          "duplicate edge " + std::to_string(e.a) + "-" +
                              std::to_string(e.b));
    adj_[e.a][e.b] = e.latency;
    adj_[e.b][e.a] = e.latency;
    nodes_.insert(e.a);
    nodes_.insert(e.b);
    edges_.push_back(e);
}

Topology Topology::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("topology.file", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

Topology Topology::parse(const std::string& text) {
    std::vector<Edge> edges;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        unsigned long a = 0, b = 0;
        double lat = 0.0;
        if (!(ls >> a)) continue;  // blank / comment-only line
        if (!(ls >> b >> lat))
            throw ConfigError("topology.file",
                              "line " + std::to_string(lineno) +
                                  ": expected 'a b latency'");
        std::string extra;
        if (ls >> extra)
            throw ConfigError("topology.file",
                              "line " + std::to_string(lineno) +
                                  ": trailing content '" + extra + "'");
        edges.push_back({static_cast<SwitchId>(a), static_cast<SwitchId>(b),
                         lat});
    }
    return Topology(edges);
}

bool Topology::has_edge(SwitchId a, SwitchId b) const {
    auto it = adj_.find(a);
    return it != adj_.end() && it->second.count(b) > 0;
}

double Topology::latency(SwitchId a, SwitchId b) const {
    auto it = adj_.find(a);
    if (it == adj_.end())
        throw Unreachable("no such node " + std::to_string(a));
    auto jt = it->second.find(b);
    if (jt == it->second.end())
        throw Unreachable("no edge " + std::to_string(a) + "-" +
                          std::to_string(b));
    return jt->second;
}

Topology Topology::without_links(
    const std::vector<std::pair<SwitchId, SwitchId>>& links) const {
    auto removed = [&](const Edge& e) {
        for (const auto& [a, b] : links)
            if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return true;
        return false;
    };
    std::vector<Edge> kept;
    for (const Edge& e : edges_)
        if (!removed(e)) kept.push_back(e);
    return Topology(kept);
}

collect::Adjacency Topology::adjacency() const {
    collect::Adjacency out;
    for (const Edge& e : edges_) {
        out[e.a].insert(e.b);
        out[e.b].insert(e.a);
    }
    return out;
}

std::vector<SwitchId> Topology::route(SwitchId src, SwitchId dst) const {
    if (src == dst) throw Unreachable("route requires src != dst");
    if (!has_node(src) || !has_node(dst))
        throw Unreachable("route endpoint not in topology");

    // Dijkstra toward dst, then a greedy walk from src that always picks the
    // smallest next node ID among optimal continuations; this yields the
    // lexicographically smallest shortest path.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::map<SwitchId, double> dist;
    for (SwitchId n : nodes_) dist[n] = kInf;
    dist[dst] = 0.0;

    using QE = std::pair<double, SwitchId>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> q;
    q.push({0.0, dst});
    while (!q.empty()) {
        auto [d, u] = q.top();
        q.pop();
        if (d > dist[u]) continue;
        for (const auto& [w, lat] : adj_.at(u)) {
            double cand = d + lat;
            if (cand < dist[w]) {
                dist[w] = cand;
                q.push({cand, w});
            }
        }
    }
    if (dist[src] == kInf)
        throw Unreachable("no path from " + std::to_string(src) + " to " +
                          std::to_string(dst));

    std::vector<SwitchId> path{src};
    SwitchId u = src;
    while (u != dst) {
        SwitchId next = 0;
        for (const auto& [w, lat] : adj_.at(u)) {
            if (dist[w] + lat == dist[u]) {  // on a shortest path
                next = w;
                break;  // adjacency map is ID-ordered: first hit is smallest
            }
        }
        if (next == 0) throw Unreachable("shortest-path walk wedged");
        path.push_back(next);
        u = next;
    }
    return path;
}

}  // namespace lint::sim
