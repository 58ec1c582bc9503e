#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lint/report.hpp"
#include "lint/scenario.hpp"
#include "lint/topology.hpp"

namespace lint::sim {

struct FlowAccounting {
    std::uint64_t emitted = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t acks_emitted = 0;
    std::uint64_t acks_delivered = 0;
    std::uint64_t acks_dropped = 0;
};

struct Accounting {
    std::vector<FlowAccounting> per_flow;
    // Forward packets reaching their sink, measured on the header the sink
    // strips (P4-INT includes the sink's own push, matching the
    // 16 + 4*v*hops growth law).
    std::uint64_t header_bytes_at_sink = 0;
    std::uint64_t forward_sink_packets = 0;
    std::uint64_t bare_sink_packets = 0;
};

struct RouteChange {
    double time = 0.0;
    std::vector<SwitchId> path;
};

// Per-flow route history as enacted by the simulator; the reference for
// trace-correctness classification.
struct GroundTruth {
    std::vector<std::vector<RouteChange>> routes;  // indexed by flow
    std::optional<double> update_time;             // logged enactment instant
    std::vector<std::size_t> updated_flows;        // flows whose path changed

    const std::vector<SwitchId>& path_at(std::size_t flow, double t) const;
};

struct RunResult {
    std::vector<SinkReport> reports;  // sink emission order
    GroundTruth ground_truth;
    Accounting accounting;
    std::vector<FlowSpec> flows;  // materialized flow list
};

// Executes one scenario under a single-threaded deterministic event loop.
// Identical scenario + seed gives a bit-identical RunResult.
RunResult run(const Scenario& scenario);

}  // namespace lint::sim
