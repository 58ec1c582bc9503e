#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lint/bloom_state.hpp"
#include "lint/report.hpp"
#include "lint/wire.hpp"

namespace lint::dlint {

struct DlintOptions {
    bool trace_reverse = false;   // trace the ACK direction as its own flow
    bool watchdog = false;        // source self-reset after stalled cycles
    std::uint32_t watchdog_threshold = 64;
};

// One DLINT-capable switch: per-flow telemetry states in a Bloom store,
// INIT/RESET signaling, and slot insertion.
//
// Forward-direction behavior follows the continuous path-tracing cycle: the
// source opens a cycle with INIT, each switch inserts its ID exactly once
// per cycle into the first free slot (attaching a fresh header to a bare
// packet when needed), and the sink closes the cycle, arming a RESET that
// rides the next reverse packet back toward the source.
class DlintSwitch {
public:
    DlintSwitch(wire::SwitchId id, std::uint32_t value_count,
                std::size_t bf_cells, std::size_t hash_count,
                std::vector<std::uint64_t> seeds, DlintOptions opts = {});

    ForwardAction process_forward(wire::Packet& pkt, Role role);

    // `reverse_role` is the switch's position on the reverse path:
    // Source = first reverse hop (the forward sink), Sink = last reverse hop
    // (the forward source).
    ForwardAction process_reverse(wire::Packet& pkt, Role reverse_role);

    wire::SwitchId id() const { return id_; }
    const bloom::BloomStateStore& store() const { return store_; }
    bloom::BloomStateStore& store() { return store_; }
    bool reset_armed(const wire::FlowKey& flow) const {
        return reset_armed_.count(flow) > 0;
    }

private:
    wire::DlintHeader& header_of(wire::Packet& pkt) const;
    static bool contains(const wire::DlintHeader& h, std::uint32_t code);
    static int first_free_slot(const wire::DlintHeader& h);
    void attach(wire::Packet& pkt, wire::SlotValue first_slot) const;
    SinkReport make_report(const wire::Packet& pkt) const;

    wire::SwitchId id_;
    std::uint32_t v_;
    bloom::BloomStateStore store_;
    DlintOptions opts_;
    std::unordered_set<wire::FlowKey, wire::FlowKeyHash> reset_armed_;
    std::unordered_map<wire::FlowKey, std::uint32_t, wire::FlowKeyHash>
        bare_streak_;  // watchdog counter, source role only
};

}  // namespace lint::dlint
