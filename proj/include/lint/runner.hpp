#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lint/metrics.hpp"
#include "lint/scenario.hpp"

namespace lint::cli {

// One sweep cell. bf_ratio <= 0 means "not swept": the scenario's own bf_k
// stands and the reported ratio is flows / bf_k.
struct Cell {
    wire::Scheme scheme = wire::Scheme::Dlint;
    std::uint32_t v = 1;
    double bf_ratio = 0.0;
};

struct CellResult {
    Cell cell;
    metrics::MetricsSummary summary;
    std::vector<collect::TraceRecord> traces;
};

// Expands --sweep axes against a base scenario into (scheme, v, bf_ratio)
// cells, sorted by (scheme name, v, bf_ratio).
std::vector<Cell> expand_cells(const sim::Scenario& base,
                               const std::vector<std::string>& sweep_specs);

// Runs one cell: scenario overrides, simulation, collection, metrics.
CellResult run_cell(const sim::Scenario& base, const Cell& cell);

// Full `run` command: load config, run every cell, write metrics.csv,
// traces.jsonl and run_meta.json under out_dir. Returns a process exit
// status (0 ok, 2 config error, 1 runtime failure).
int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override,
                const std::vector<std::string>& sweep_specs);

// argv-level entry point used by the lintsim binary.
int run_main(int argc, const char* const* argv);

std::string format_double(double x);

}  // namespace lint::cli
