#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lint/collector.hpp"
#include "lint/rng.hpp"
#include "lint/topology.hpp"
#include "lint/wire.hpp"

namespace lint::sim {

// One monitored flow. `reverse_path` overrides the ACK route for
// path-asymmetry experiments; by default ACKs traverse the forward route
// reversed.
struct FlowSpec {
    wire::FlowKey key;
    SwitchId src_node = 0;
    SwitchId dst_node = 0;
    double start = 0.0;
    std::uint64_t size_packets = 1;
    double inter_packet_gap = 0.001;
    std::uint32_t payload_bytes = 512;
    std::optional<std::vector<SwitchId>> reverse_path;
};

struct FlowGenParams {
    std::uint32_t flow_count = 1;
    double zipf_exponent = 1.2;
    double inter_packet_gap = 0.01;
    std::uint32_t payload_bytes = 512;
    std::vector<SwitchId> src_pool;
    std::vector<SwitchId> dst_pool;
};

// Flow sizes follow Zipf(s) truncated to [1, 1e5] packets; start times are
// uniform on [0, duration). Deterministic for a fixed rng state.
std::vector<FlowSpec> generate_flows(const FlowGenParams& params,
                                     double duration, Xoshiro256& rng);

struct UpdatePlan {
    double time = 0.0;
    std::vector<std::pair<SwitchId, SwitchId>> removed_links;
    // flow index -> explicit replacement path (adjacency-checked)
    std::vector<std::pair<std::size_t, std::vector<SwitchId>>> alternate_paths;
};

struct LinkLoss {
    SwitchId a = 0;
    SwitchId b = 0;
    double prob = 0.0;
};

struct Scenario {
    Topology topology;
    wire::Scheme scheme = wire::Scheme::Dlint;
    std::uint32_t v = 1;
    std::size_t bf_cells = 65536;
    std::size_t hash_count = 1;
    std::uint64_t seed = 1;
    double duration = 60.0;
    double default_loss = 0.0;
    std::vector<LinkLoss> link_loss;
    std::optional<UpdatePlan> update;
    bool trace_reverse = false;
    bool dedup_at_sink = false;
    bool watchdog = false;
    std::uint32_t watchdog_threshold = 64;
    std::uint32_t ack_every = 1;  // 0 disables ACK echo
    collect::DetectionMode detection_mode = collect::DetectionMode::WholeTrace;

    std::vector<FlowSpec> flows;              // explicit flows, or
    std::optional<FlowGenParams> flow_gen;    // generated at run start

    // Resolves generated flows and validates everything; returns the final
    // flow list. Throws ConfigError with a field path.
    std::vector<FlowSpec> materialize_flows() const;
    void validate() const;
};

// Strict JSON scenario parsing: unknown keys are an error. `base_dir` is
// prepended to relative topology file paths.
Scenario scenario_from_json_text(const std::string& text,
                                 const std::string& base_dir = ".");
Scenario scenario_from_file(const std::string& path);

}  // namespace lint::sim
