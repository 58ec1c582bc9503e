#include "lint/collector.hpp"

#include <algorithm>
#include <functional>

namespace lint::collect {

Collector::Collector(wire::Scheme scheme, Adjacency adjacency)
    : scheme_(scheme), adjacency_(std::move(adjacency)) {}

void Collector::ingest_all(const std::vector<SinkReport>& reports) {
    for (const SinkReport& r : reports) ingest(r);
}

std::vector<TraceRecord> Collector::ingest(const SinkReport& r) {
    if (r.scheme != scheme_)
        throw Error("report scheme does not match collector scheme");
    FlowState& st = flows_[r.flow];
    switch (scheme_) {
        case wire::Scheme::Dlint: return ingest_dlint(st, r);
        case wire::Scheme::Plint: return ingest_plint(st, r);
        case wire::Scheme::PintLite: return ingest_pintlite(st, r);
        case wire::Scheme::P4Int: return ingest_p4int(st, r);
    }
    throw Error("unhandled scheme");
}

void Collector::on_finalized(FlowState& st, const TraceRecord& t) {
    traces_.push_back(t);
    if (!t.complete) return;

    // Whole-trace detection: a completed trace that differs from the known
    // path signals an update; the known path then follows the stream.
    if (st.known_whole.empty()) {
        st.known_whole = t.hops;
    } else if (st.known_whole != t.hops) {
        detections_.push_back({t.flow, DetectionMode::WholeTrace,
                               t.completed_at});
        st.known_whole = t.hops;
    }

    // Early detection re-baselines (and re-arms) on every completed trace.
    st.known_early = t.hops;
    st.early_fired = false;
}

std::vector<TraceRecord> Collector::ingest_dlint(FlowState& st,
                                                 const SinkReport& r) {
    std::vector<TraceRecord> out;

    auto finalize = [&](bool by_cycle_marker) {
        TraceRecord t;
        t.flow = r.flow;
        t.scheme = scheme_;
        t.hops = st.partial;
        t.complete = by_cycle_marker && !st.partial.empty() &&
                     st.partial.size() == r.path_len;
        t.ids_consumed = st.ids_since_complete;
        t.completed_at = r.timestamp;
        if (t.complete) st.ids_since_complete = 0;
        st.partial.clear();
        on_finalized(st, t);
        out.push_back(std::move(t));
    };

    // INIT opens a new cycle; whatever was accumulated is incomplete.
    bool has_init =
        std::find(r.signals.begin(), r.signals.end(),
                  wire::SlotValue::kInit) != r.signals.end();
    if (has_init && !st.partial.empty()) finalize(false);

    for (const ReportItem& item : r.items) {
        std::size_t pos = st.partial.size();  // 0-based position of this ID
        if (!st.known_early.empty() && !st.early_fired &&
            (pos >= st.known_early.size() ||
             st.known_early[pos] != item.sw_id)) {
            detections_.push_back({r.flow, DetectionMode::Early, r.timestamp});
            st.early_fired = true;
        }
        st.partial.push_back(item.sw_id);
        st.ids_since_complete++;
    }

    if (r.cycle_complete) finalize(true);
    return out;
}

std::vector<TraceRecord> Collector::ingest_plint(FlowState& st,
                                                 const SinkReport& r) {
    std::vector<TraceRecord> out;

    // Stale hop positions from a path of a different length must not leak
    // into the next trace.
    if (st.last_path_len != 0 && st.last_path_len != r.path_len)
        st.by_hop.clear();
    st.last_path_len = r.path_len;

    if (!st.known_early.empty() && !st.early_fired &&
        r.path_len != st.known_early.size()) {
        detections_.push_back({r.flow, DetectionMode::Early, r.timestamp});
        st.early_fired = true;
    }

    for (const ReportItem& item : r.items) {
        if (!item.hop_num)
            throw InconsistentHop("PLINT report item lacks a hop number");
        std::uint32_t hop = *item.hop_num;
        if (hop < 1 || hop > r.path_len)
            throw InconsistentHop("hop_num " + std::to_string(hop) +
                                  " outside path length " +
                                  std::to_string(r.path_len));

        if (!st.known_early.empty() && !st.early_fired &&
            hop <= st.known_early.size() &&
            st.known_early[hop - 1] != item.sw_id) {
            detections_.push_back({r.flow, DetectionMode::Early, r.timestamp});
            st.early_fired = true;
        }

        st.by_hop[hop] = item.sw_id;  // last write wins
        st.ids_since_complete++;

        if (st.by_hop.size() == r.path_len) {
            TraceRecord t;
            t.flow = r.flow;
            t.scheme = scheme_;
            t.hops.reserve(r.path_len);
            for (const auto& [h, id] : st.by_hop) t.hops.push_back(id);
            t.complete = true;
            t.ids_consumed = st.ids_since_complete;
            t.completed_at = r.timestamp;
            st.ids_since_complete = 0;
            st.by_hop.clear();
            on_finalized(st, t);
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<TraceRecord> Collector::ingest_pintlite(FlowState& st,
                                                    const SinkReport& r) {
    std::vector<TraceRecord> out;

    if (st.last_path_len != 0 && st.last_path_len != r.path_len)
        st.distinct.clear();
    st.last_path_len = r.path_len;

    if (!st.known_early.empty() && !st.early_fired &&
        r.path_len != st.known_early.size()) {
        detections_.push_back({r.flow, DetectionMode::Early, r.timestamp});
        st.early_fired = true;
    }

    for (const ReportItem& item : r.items) {
        // Without hop numbers the only early signal is an ID that was never
        // on the known path.
        if (!st.known_early.empty() && !st.early_fired &&
            std::find(st.known_early.begin(), st.known_early.end(),
                      item.sw_id) == st.known_early.end()) {
            detections_.push_back({r.flow, DetectionMode::Early, r.timestamp});
            st.early_fired = true;
        }

        st.distinct.insert(item.sw_id);
        st.ids_since_complete++;

        if (st.distinct.size() == r.path_len) {
            TraceRecord t;
            t.flow = r.flow;
            t.scheme = scheme_;
            t.complete = true;
            t.ids_consumed = st.ids_since_complete;
            t.completed_at = r.timestamp;
            if (auto order = resolve_order(st.distinct)) {
                t.hops = *order;
            } else {
                t.hops.assign(st.distinct.begin(), st.distinct.end());
                t.order_ambiguous = true;
            }
            st.ids_since_complete = 0;
            st.distinct.clear();
            on_finalized(st, t);
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<TraceRecord> Collector::ingest_p4int(FlowState& st,
                                                 const SinkReport& r) {
    // Zero aggregation: every packet carries the full ordered path.
    if (!st.known_early.empty() && !st.early_fired &&
        r.path_len != st.known_early.size()) {
        detections_.push_back({r.flow, DetectionMode::Early, r.timestamp});
        st.early_fired = true;
    }

    TraceRecord t;
    t.flow = r.flow;
    t.scheme = scheme_;
    t.completed_at = r.timestamp;
    for (std::size_t i = 0; i < r.items.size(); ++i) {
        if (!st.known_early.empty() && !st.early_fired &&
            (i >= st.known_early.size() ||
             st.known_early[i] != r.items[i].sw_id)) {
            detections_.push_back({r.flow, DetectionMode::Early, r.timestamp});
            st.early_fired = true;
        }
        t.hops.push_back(r.items[i].sw_id);
        st.ids_since_complete++;
    }
    t.complete = !t.hops.empty();
    t.ids_consumed = st.ids_since_complete;
    if (t.complete) st.ids_since_complete = 0;
    on_finalized(st, t);
    return {t};
}

std::optional<std::vector<wire::SwitchId>> Collector::resolve_order(
    const std::set<wire::SwitchId>& ids) const {
    if (adjacency_.empty()) return std::nullopt;
    if (ids.size() == 1)
        return std::vector<wire::SwitchId>{*ids.begin()};

    // Enumerate Hamiltonian paths of the induced subgraph; keep going only
    // until a second distinct (undirected) ordering shows up.
    std::vector<wire::SwitchId> nodes(ids.begin(), ids.end());
    std::vector<std::vector<wire::SwitchId>> found;

    std::vector<wire::SwitchId> path;
    std::set<wire::SwitchId> used;

    auto neighbors_in = [&](wire::SwitchId u) {
        std::vector<wire::SwitchId> out;
        auto it = adjacency_.find(u);
        if (it == adjacency_.end()) return out;
        for (wire::SwitchId w : it->second)
            if (ids.count(w) && !used.count(w)) out.push_back(w);
        return out;
    };

    std::function<void(wire::SwitchId)> extend = [&](wire::SwitchId u) {
        path.push_back(u);
        used.insert(u);
        if (path.size() == ids.size()) {
            std::vector<wire::SwitchId> rev(path.rbegin(), path.rend());
            std::vector<wire::SwitchId> canon = std::min(path, rev);
            if (std::find(found.begin(), found.end(), canon) == found.end())
                found.push_back(canon);
        } else {
            for (wire::SwitchId w : neighbors_in(u)) {
                if (found.size() > 1) break;
                extend(w);
            }
        }
        used.erase(u);
        path.pop_back();
    };

    for (wire::SwitchId start : nodes) {
        extend(start);
        if (found.size() > 1) return std::nullopt;
    }
    if (found.size() == 1) return found.front();
    return std::nullopt;
}

}  // namespace lint::collect
