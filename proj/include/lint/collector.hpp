#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "lint/report.hpp"
#include "lint/wire.hpp"

namespace lint::collect {

// One reconstructed path attempt. `complete` is a structural judgment
// (cycle and length bookkeeping only); comparison against ground truth
// happens in the metrics layer.
struct TraceRecord {
    wire::FlowKey flow;
    wire::Scheme scheme = wire::Scheme::Dlint;
    std::vector<wire::SwitchId> hops;
    bool complete = false;
    bool order_ambiguous = false;  // PINT-lite only
    std::uint64_t ids_consumed = 0;
    double completed_at = 0.0;
};

enum class DetectionMode : std::uint8_t { WholeTrace, Early };

struct DetectionEvent {
    wire::FlowKey flow;
    DetectionMode mode = DetectionMode::WholeTrace;
    double detected_at = 0.0;
};

// Undirected adjacency used for best-effort PINT-lite hop ordering.
using Adjacency =
    std::unordered_map<wire::SwitchId, std::set<wire::SwitchId>>;

// Per-flow trace reconstruction for every scheme, plus whole-trace and
// early path-update detection running side by side on the same stream.
//
// DLINT: INIT opens a cycle (closing any nonempty partial as incomplete),
// IDs append in slot order, the sink's cycle-complete marker finalizes;
// the finalized trace counts as complete when its length matches the
// observed path length. PLINT: a last-write-wins hop_num -> id map that
// finalizes once positions 1..n are all filled. PINT-lite: a distinct-ID
// set that finalizes at n distinct IDs. P4-INT: every report is a trace.
class Collector {
public:
    explicit Collector(wire::Scheme scheme, Adjacency adjacency = {});

    // Feed one report; returns the traces it finalized (possibly none) and
    // appends any detection events to the internal log.
    std::vector<TraceRecord> ingest(const SinkReport& r);

    const std::vector<DetectionEvent>& detections() const {
        return detections_;
    }
    const std::vector<TraceRecord>& traces() const { return traces_; }

    // Consumes a whole stream in order.
    void ingest_all(const std::vector<SinkReport>& reports);

private:
    struct FlowState {
        // DLINT
        std::vector<wire::SwitchId> partial;
        // PLINT
        std::map<std::uint32_t, wire::SwitchId> by_hop;
        std::uint32_t last_path_len = 0;
        // PINT-lite
        std::set<wire::SwitchId> distinct;
        // shared
        std::uint64_t ids_since_complete = 0;

        // detection trackers
        std::vector<wire::SwitchId> known_whole;
        std::vector<wire::SwitchId> known_early;
        bool early_fired = false;  // suppressed until next completed trace
        std::size_t early_pos = 0; // DLINT partial position mirror
    };

    std::vector<TraceRecord> ingest_dlint(FlowState& st, const SinkReport& r);
    std::vector<TraceRecord> ingest_plint(FlowState& st, const SinkReport& r);
    std::vector<TraceRecord> ingest_pintlite(FlowState& st,
                                             const SinkReport& r);
    std::vector<TraceRecord> ingest_p4int(FlowState& st, const SinkReport& r);

    void detect_early(FlowState& st, const SinkReport& r);
    void on_finalized(FlowState& st, const TraceRecord& t);

    // Best-effort unique Hamiltonian ordering of `ids` in the adjacency
    // graph; nullopt when none or more than one exists.
    std::optional<std::vector<wire::SwitchId>> resolve_order(
        const std::set<wire::SwitchId>& ids) const;

    wire::Scheme scheme_;
    Adjacency adjacency_;
    std::unordered_map<wire::FlowKey, FlowState, wire::FlowKeyHash> flows_;
    std::vector<TraceRecord> traces_;
    std::vector<DetectionEvent> detections_;
};

}  // namespace lint::collect
