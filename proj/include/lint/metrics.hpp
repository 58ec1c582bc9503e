#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lint/collector.hpp"
#include "lint/simnet.hpp"

namespace lint::metrics {

// One result row: the evaluation quantities for one (scheme, v, bf_ratio)
// cell.
struct MetricsSummary {
    std::string scheme;
    std::uint32_t v = 1;
    double bf_ratio = 0.0;  // monitored flows / BF cells (DLINT knob)

    double overhead_bytes_per_packet = 0.0;
    std::uint64_t complete_traces = 0;  // exact ground-truth matches
    double header_space_utilization = 0.0;
    std::uint64_t switch_ids_delivered = 0;
    double pct_ids_conveyed = 0.0;
    double duplicate_pct = 0.0;  // PLINT within-packet duplicate fraction
    double ids_per_trace = 0.0;  // mean ids_consumed over completed traces
    double update_detection_rate = 0.0;
    double detection_time_mean = 0.0;
    double bare_packet_fraction = 0.0;
};

// Reduces one finished run against its ground truth.
//
// Pinned definitions:
//   utilization      = id-bearing slots / (v x packets past the sink); bare
//                      packets count as v empty slots; P4-INT's budget is its
//                      whole stack (v x hops per packet).
//   pct_ids_conveyed = delivered non-signal IDs / (delivered packets x v).
//   duplicate_pct    = mean over packets of (v - distinct slot IDs) / v.
//   ids_per_trace    = mean ids_consumed over structurally complete traces.
//   detection        = flows with an event at/after the update instant over
//                      flows that had a baseline trace before it; the time
//                      mean covers detected flows only.
MetricsSummary compute_metrics(const sim::RunResult& run,
                               const std::vector<collect::TraceRecord>& traces,
                               const std::vector<collect::DetectionEvent>& detections,
                               collect::DetectionMode detection_mode,
                               wire::Scheme scheme, std::uint32_t v,
                               double bf_ratio);

// Expected uniform samples to observe all n distinct values: n * H_n.
double oracle_coupon_collector(std::uint32_t n);

// Expected within-packet duplicate fraction for k independent uniform slots
// over n switches: (k - n(1 - (1 - 1/n)^k)) / k.
double oracle_duplicate_fraction(std::uint32_t n, std::uint32_t k);

// Bloom filter false-positive rate (1 - e^{-mN/K})^m.
double bf_false_positive_rate(std::uint64_t cells, std::uint64_t entries,
                              std::uint32_t hashes);

// Optimal hash count (ln 2) K / N; throws DivisionByZero when N = 0.
double bf_optimal_hash_count(std::uint64_t cells, std::uint64_t entries);

}  // namespace lint::metrics
