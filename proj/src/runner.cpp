#include "lint/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lint/simnet.hpp"

namespace lint::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kVersion = "0.1.0";

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

std::size_t scenario_flow_count(const sim::Scenario& sc) {
    return sc.flow_gen ? sc.flow_gen->flow_count : sc.flows.size();
}

ordered_json flow_key_json(const wire::FlowKey& k) {
    return ordered_json{{"src_addr", k.src_addr}, {"dst_addr", k.dst_addr},
                        {"src_port", k.src_port}, {"dst_port", k.dst_port},
                        {"proto", k.proto}};
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

std::vector<Cell> expand_cells(const sim::Scenario& base,
                               const std::vector<std::string>& sweep_specs) {
    std::vector<wire::Scheme> schemes{base.scheme};
    std::vector<std::uint32_t> vs{base.v};
    double base_ratio =
        static_cast<double>(scenario_flow_count(base)) /
        static_cast<double>(base.bf_cells);
    std::vector<double> ratios{base.scheme == wire::Scheme::Dlint ? base_ratio
                                                                  : 0.0};
    bool ratio_swept = false;

    for (const std::string& spec : sweep_specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw ConfigError("sweep", "expected KEY=V1,V2,... got '" + spec +
                                           "'");
        std::string key = spec.substr(0, eq);
        auto values = split_csv(spec.substr(eq + 1));
        if (values.empty())
            throw ConfigError("sweep." + key, "no values given");
        if (key == "scheme") {
            schemes.clear();
            for (const auto& name : values)
                schemes.push_back(wire::scheme_from_name(name));
        } else if (key == "v") {
            vs.clear();
            for (const auto& val : values) {
                int v = std::stoi(val);
                if (v < 1 || v > 8)
                    throw ConfigError("sweep.v", "must be in [1, 8]");
                vs.push_back(static_cast<std::uint32_t>(v));
            }
        } else if (key == "bf_ratio") {
            ratios.clear();
            for (const auto& val : values) {
                double r = std::stod(val);
                if (!(r > 0.0))
                    throw ConfigError("sweep.bf_ratio", "must be > 0");
                ratios.push_back(r);
            }
            ratio_swept = true;
        } else {
            throw ConfigError("sweep." + key,
                              "unknown sweep axis (scheme, v, bf_ratio)");
        }
    }

    std::vector<Cell> cells;
    for (wire::Scheme s : schemes)
        for (std::uint32_t v : vs)
            for (double r : ratios)
                cells.push_back({s, v, ratio_swept ? r : 0.0});

    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        std::string an = wire::scheme_name(a.scheme);
        std::string bn = wire::scheme_name(b.scheme);
        if (an != bn) return an < bn;
        if (a.v != b.v) return a.v < b.v;
        return a.bf_ratio < b.bf_ratio;
    });
    return cells;
}

CellResult run_cell(const sim::Scenario& base, const Cell& cell) {
    sim::Scenario sc = base;
    sc.scheme = cell.scheme;
    sc.v = cell.v;

    double reported_ratio;
    std::size_t flow_count = scenario_flow_count(sc);
    if (cell.bf_ratio > 0.0) {
        sc.bf_cells = std::max<std::size_t>(
            1, static_cast<std::size_t>(
                   std::llround(static_cast<double>(flow_count) /
                                cell.bf_ratio)));
        reported_ratio = cell.bf_ratio;
    } else {
        reported_ratio = static_cast<double>(flow_count) /
                         static_cast<double>(sc.bf_cells);
    }

    sim::RunResult run = sim::run(sc);

    collect::Collector collector(sc.scheme, sc.topology.adjacency());
    collector.ingest_all(run.reports);

    CellResult out;
    out.cell = cell;
    out.cell.bf_ratio = reported_ratio;
    out.summary = metrics::compute_metrics(
        run, collector.traces(), collector.detections(), sc.detection_mode,
        sc.scheme, sc.v, reported_ratio);
    out.traces = collector.traces();
    return out;
}

namespace {

const char* kCsvHeader =
    "scheme,v,bf_ratio,overhead_bytes_per_packet,complete_traces,"
    "header_space_utilization,switch_ids_delivered,pct_ids_conveyed,"
    "duplicate_pct,ids_per_trace,update_detection_rate,detection_time_mean,"
    "bare_packet_fraction";

std::string csv_row(const metrics::MetricsSummary& m) {
    std::ostringstream out;
    out << m.scheme << ',' << m.v << ',' << format_double(m.bf_ratio) << ','
        << format_double(m.overhead_bytes_per_packet) << ','
        << m.complete_traces << ','
        << format_double(m.header_space_utilization) << ','
        << m.switch_ids_delivered << ',' << format_double(m.pct_ids_conveyed)
        << ',' << format_double(m.duplicate_pct) << ','
        << format_double(m.ids_per_trace) << ','
        << format_double(m.update_detection_rate) << ','
        << format_double(m.detection_time_mean) << ','
        << format_double(m.bare_packet_fraction);
    return out.str();
}

}  // namespace

int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> seed_override,
                const std::vector<std::string>& sweep_specs) {
    try {
        sim::Scenario base = sim::scenario_from_file(config_path);
        if (seed_override) base.seed = *seed_override;

        auto cells = expand_cells(base, sweep_specs);

        std::filesystem::create_directories(out_dir);
        std::ofstream metrics_out(std::filesystem::path(out_dir) /
                                  "metrics.csv");
        std::ofstream traces_out(std::filesystem::path(out_dir) /
                                 "traces.jsonl");
        if (!metrics_out || !traces_out) {
            std::cerr << "error: cannot write to " << out_dir << "\n";
            return 1;
        }

        metrics_out << kCsvHeader << "\n";
        for (const Cell& cell : cells) {
            CellResult res = run_cell(base, cell);
            metrics_out << csv_row(res.summary) << "\n";
            for (const collect::TraceRecord& t : res.traces) {
                ordered_json row{
                    {"scheme", wire::scheme_name(t.scheme)},
                    {"v", res.summary.v},
                    {"bf_ratio", res.summary.bf_ratio},
                    {"flow", flow_key_json(t.flow)},
                    {"hops", t.hops},
                    {"complete", t.complete},
                    {"order_ambiguous", t.order_ambiguous},
                    {"ids_consumed", t.ids_consumed},
                    {"completed_at", t.completed_at},
                };
                traces_out << row.dump() << "\n";
            }
        }

        std::ifstream cfg_in(config_path);
        std::stringstream cfg_text;
        cfg_text << cfg_in.rdbuf();
        ordered_json meta{
            {"version", kVersion},
            {"seed", base.seed},
            {"cells", cells.size()},
            {"config", ordered_json::parse(cfg_text.str())},
        };
        std::ofstream meta_out(std::filesystem::path(out_dir) /
                               "run_meta.json");
        meta_out << meta.dump(2) << "\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_main(int argc, const char* const* argv) {
    CLI::App app{"lightweight in-band telemetry simulator"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run one scenario or a sweep");
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> sweeps;
    run_cmd->add_option("--config", config_path, "scenario config JSON")
        ->required();
    run_cmd->add_option("--out", out_dir, "output directory")->required();
    run_cmd->add_option("--seed", seed, "override the scenario seed")
        ->each([&](const std::string&) { seed_set = true; });
    run_cmd->add_option("--sweep", sweeps,
                        "sweep axis KEY=V1,V2,... (scheme, v, bf_ratio)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    return run_command(config_path, out_dir,
                       seed_set ? std::optional<std::uint64_t>(seed)
                                : std::nullopt,
                       sweeps);
}

}  // namespace lint::cli
