#include "lint/metrics.hpp"

#include <cmath>
#include <set>
#include <unordered_map>

namespace lint::metrics {

using collect::DetectionEvent;
using collect::DetectionMode;
using collect::TraceRecord;
using sim::RunResult;

MetricsSummary compute_metrics(const RunResult& run,
                               const std::vector<TraceRecord>& traces,
                               const std::vector<DetectionEvent>& detections,
                               DetectionMode detection_mode, wire::Scheme scheme,
                               std::uint32_t v, double bf_ratio) {
    MetricsSummary m;
    m.scheme = wire::scheme_name(scheme);
    m.v = v;
    m.bf_ratio = bf_ratio;

    std::unordered_map<wire::FlowKey, std::size_t, wire::FlowKeyHash> flow_idx;
    for (std::size_t i = 0; i < run.flows.size(); ++i)
        flow_idx[run.flows[i].key] = i;

    // Packet-level aggregates over forward sink traversals. Reverse-trace
    // reports carry a reversed key and are excluded.
    std::uint64_t packets = 0;
    std::uint64_t slot_budget = 0;
    std::uint64_t id_slots = 0;
    std::uint64_t ids_delivered = 0;
    std::uint64_t bare = 0;
    double duplicate_sum = 0.0;

    for (const SinkReport& r : run.reports) {
        if (!flow_idx.count(r.flow)) continue;
        packets++;
        ids_delivered += r.items.size();
        if (r.bare) {
            bare++;
            slot_budget += v;
        } else if (r.scheme == wire::Scheme::P4Int) {
            slot_budget += static_cast<std::uint64_t>(v) * r.path_len;
            id_slots += r.items.size();
        } else if (r.scheme == wire::Scheme::PintLite) {
            slot_budget += 1;
            id_slots += r.items.size();
        } else {
            slot_budget += v;
            id_slots += r.items.size();
        }
        if (r.scheme == wire::Scheme::Plint && !r.items.empty()) {
            std::set<wire::SwitchId> distinct;
            for (const ReportItem& it : r.items) distinct.insert(it.sw_id);
            duplicate_sum +=
                static_cast<double>(r.items.size() - distinct.size()) /
                static_cast<double>(r.items.size());
        }
    }

    if (packets > 0) {
        m.overhead_bytes_per_packet =
            static_cast<double>(run.accounting.header_bytes_at_sink) /
            static_cast<double>(run.accounting.forward_sink_packets);
        m.header_space_utilization =
            slot_budget > 0 ? static_cast<double>(id_slots) /
                                  static_cast<double>(slot_budget)
                            : 0.0;
        m.pct_ids_conveyed =
            static_cast<double>(ids_delivered) /
            (static_cast<double>(packets) * static_cast<double>(v));
        m.duplicate_pct = duplicate_sum / static_cast<double>(packets);
        m.bare_packet_fraction =
            static_cast<double>(bare) / static_cast<double>(packets);
    }
    m.switch_ids_delivered = ids_delivered;

    // Trace-level aggregates. A trace counts as complete only when it equals
    // the ground-truth path in force at its completion instant.
    std::uint64_t complete_structural = 0;
    double ids_consumed_sum = 0.0;
    std::unordered_map<std::size_t, double> first_complete_at;
    for (const TraceRecord& t : traces) {
        auto it = flow_idx.find(t.flow);
        if (it == flow_idx.end() || !t.complete) continue;
        complete_structural++;
        ids_consumed_sum += static_cast<double>(t.ids_consumed);
        if (!first_complete_at.count(it->second))
            first_complete_at[it->second] = t.completed_at;
        if (t.hops ==
            run.ground_truth.path_at(it->second, t.completed_at))
            m.complete_traces++;
    }
    if (complete_structural > 0)
        m.ids_per_trace =
            ids_consumed_sum / static_cast<double>(complete_structural);

    // Update detection against the logged enactment instant.
    if (run.ground_truth.update_time) {
        double t0 = *run.ground_truth.update_time;
        std::set<std::size_t> eligible;
        for (std::size_t i : run.ground_truth.updated_flows) {
            auto it = first_complete_at.find(i);
            if (it != first_complete_at.end() && it->second < t0)
                eligible.insert(i);
        }
        std::unordered_map<std::size_t, double> detected_at;
        for (const DetectionEvent& e : detections) {
            if (e.mode != detection_mode || e.detected_at < t0) continue;
            auto it = flow_idx.find(e.flow);
            if (it == flow_idx.end() || !eligible.count(it->second)) continue;
            if (!detected_at.count(it->second))
                detected_at[it->second] = e.detected_at;
        }
        if (!eligible.empty())
            m.update_detection_rate = static_cast<double>(detected_at.size()) /
                                      static_cast<double>(eligible.size());
        if (!detected_at.empty()) {
            double sum = 0.0;
            for (const auto& [flow, at] : detected_at) sum += at - t0;
            m.detection_time_mean = sum / static_cast<double>(detected_at.size());
        }
    }
    return m;
}

double oracle_coupon_collector(std::uint32_t n) {
    if (n < 1) throw InvariantViolation("coupon collector needs n >= 1");
    double harmonic = 0.0;
    for (std::uint32_t i = 1; i <= n; ++i) harmonic += 1.0 / i;
    return n * harmonic;
}

double oracle_duplicate_fraction(std::uint32_t n, std::uint32_t k) {
    if (n < 1 || k < 1)
        throw InvariantViolation("duplicate fraction needs n, k >= 1");
    double expected_distinct =
        n * (1.0 - std::pow(1.0 - 1.0 / n, static_cast<double>(k)));
    return (k - expected_distinct) / k;
}

double bf_false_positive_rate(std::uint64_t cells, std::uint64_t entries,
                              std::uint32_t hashes) {
    if (cells < 1) throw InvariantViolation("BF oracle needs K >= 1");
    double exponent = -static_cast<double>(hashes) *
                      static_cast<double>(entries) /
                      static_cast<double>(cells);
    return std::pow(1.0 - std::exp(exponent), static_cast<double>(hashes));
}

double bf_optimal_hash_count(std::uint64_t cells, std::uint64_t entries) {
    if (entries == 0)
        throw DivisionByZero("optimal hash count undefined for N = 0");
    return std::log(2.0) * static_cast<double>(cells) /
           static_cast<double>(entries);
}

}  // namespace lint::metrics
