#include <cmath>

#include "lint/scenario.hpp"

namespace lint::sim {

namespace {
constexpr std::uint64_t kMaxFlowPackets = 100000;  // Zipf truncation bound
}

std::vector<FlowSpec> generate_flows(const FlowGenParams& params,
                                     double duration, Xoshiro256& rng) {
    if (params.flow_count < 1)
        throw ConfigError("flow_gen.flow_count", "must be >= 1");
    if (!(params.zipf_exponent > 1.0))
        throw ConfigError("flow_gen.zipf_exponent", "must be > 1");
    if (params.src_pool.empty())
        throw ConfigError("flow_gen.src_pool", "must not be empty");
    if (params.dst_pool.empty())
        throw ConfigError("flow_gen.dst_pool", "must not be empty");
    if (!(params.inter_packet_gap > 0.0))
        throw ConfigError("flow_gen.inter_packet_gap", "must be > 0");

    // Inverse-CDF sampling over the truncated Zipf pmf, p(k) ~ k^-s.
    std::vector<double> cdf(kMaxFlowPackets);
    double total = 0.0;
    for (std::uint64_t k = 1; k <= kMaxFlowPackets; ++k) {
        total += std::pow(static_cast<double>(k), -params.zipf_exponent);
        cdf[k - 1] = total;
    }

    auto draw_size = [&]() -> std::uint64_t {
        double u = rng.uniform01() * total;
        std::size_t lo = 0, hi = cdf.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (cdf[mid] < u)
                lo = mid + 1;
            else
                hi = mid;
        }
        return static_cast<std::uint64_t>(lo) + 1;
    };

    std::vector<FlowSpec> flows;
    flows.reserve(params.flow_count);
    for (std::uint32_t i = 0; i < params.flow_count; ++i) {
        FlowSpec f;
        f.size_packets = draw_size();
        f.start = rng.uniform01() * duration;
        f.src_node = params.src_pool[static_cast<std::size_t>(
            rng.uniform_below(params.src_pool.size()))];
        std::vector<SwitchId> dst_candidates;
        for (SwitchId d : params.dst_pool)
            if (d != f.src_node) dst_candidates.push_back(d);
        if (dst_candidates.empty())
            throw ConfigError("flow_gen.dst_pool",
                              "no destination differs from source " +
                                  std::to_string(f.src_node));
        f.dst_node = dst_candidates[static_cast<std::size_t>(
            rng.uniform_below(dst_candidates.size()))];
        f.inter_packet_gap = params.inter_packet_gap;
        f.payload_bytes = params.payload_bytes;
        // Distinct 5-tuples: the port pair encodes the flow index.
        f.key.src_addr = 0x0A000000u | f.src_node;
        f.key.dst_addr = 0x0A000000u | f.dst_node;
        f.key.src_port = static_cast<std::uint16_t>(1024 + (i % 60000));
        f.key.dst_port = static_cast<std::uint16_t>(1024 + (i / 60000));
        f.key.proto = 6;
        flows.push_back(std::move(f));
    }
    return flows;
}

}  // namespace lint::sim
