#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lint/wire.hpp"

namespace lint {

// Per-flow switch role, supplied by the simulator from the packet's route.
enum class Role : std::uint8_t { Source, Transit, Sink };

// One switch-ID observation inside a sink report. hop_num is present only
// for schemes that convey it (PLINT, P4-INT position).
struct ReportItem {
    wire::SwitchId sw_id = 0;
    std::optional<std::uint8_t> hop_num;
    bool operator==(const ReportItem&) const = default;
};

// What an INT sink hands to the telemetry server for one packet.
struct SinkReport {
    wire::FlowKey flow;
    wire::Scheme scheme = wire::Scheme::Dlint;
    std::vector<ReportItem> items;          // slot order, signals excluded
    std::vector<std::uint32_t> signals;     // raw signal codes seen
    bool cycle_complete = false;            // DLINT: sink's own ID delivered
    bool bare = false;                      // packet reached the sink headerless
    std::uint32_t path_len = 0;             // observed hop count
    double timestamp = 0.0;
};

// Outcome of one switch processing one packet.
struct ForwardAction {
    bool attached_header = false;
    bool wrote_slot = false;                // own-ID insertion happened
    bool stripped_header = false;
    std::size_t stripped_bytes = 0;         // wire size of the stripped header
    std::optional<std::uint8_t> new_state_code;  // state written, if any
    std::optional<SinkReport> report;
};

}  // namespace lint
