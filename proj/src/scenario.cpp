#include "lint/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lint::sim {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(path.empty() ? it.key() : path + "." + it.key(),
                              "unknown key");
}

template <typename T>
T require(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError(path.empty() ? key : path + "." + key,
                          "missing required key");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(path.empty() ? key : path + "." + key,
                          std::string("bad value: ") + e.what());
    }
}

template <typename T>
T optional_or(const json& obj, const std::string& path, const std::string& key,
              T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(path.empty() ? key : path + "." + key,
                          std::string("bad value: ") + e.what());
    }
}

std::vector<SwitchId> node_list(const json& arr, const std::string& path) {
    if (!arr.is_array()) throw ConfigError(path, "expected an array");
    std::vector<SwitchId> out;
    for (const auto& x : arr) {
        if (!x.is_number_unsigned())
            throw ConfigError(path, "node ids must be positive integers");
        out.push_back(x.get<SwitchId>());
    }
    return out;
}

FlowSpec parse_flow(const json& jf, const std::string& path) {
    if (!jf.is_object()) throw ConfigError(path, "expected an object");
    reject_unknown_keys(jf, path,
                        {"src_node", "dst_node", "start", "size_packets",
                         "inter_packet_gap", "payload_bytes", "key",
                         "reverse_path"});
    FlowSpec f;
    f.src_node = require<SwitchId>(jf, path, "src_node");
    f.dst_node = require<SwitchId>(jf, path, "dst_node");
    f.start = optional_or<double>(jf, path, "start", 0.0);
    f.size_packets = require<std::uint64_t>(jf, path, "size_packets");
    f.inter_packet_gap =
        optional_or<double>(jf, path, "inter_packet_gap", 0.001);
    f.payload_bytes = optional_or<std::uint32_t>(jf, path, "payload_bytes", 512);
    if (jf.contains("key")) {
        const json& jk = jf.at("key");
        std::string kp = path + ".key";
        reject_unknown_keys(jk, kp,
                            {"src_addr", "dst_addr", "src_port", "dst_port",
                             "proto"});
        f.key.src_addr = require<std::uint32_t>(jk, kp, "src_addr");
        f.key.dst_addr = require<std::uint32_t>(jk, kp, "dst_addr");
        f.key.src_port = require<std::uint16_t>(jk, kp, "src_port");
        f.key.dst_port = require<std::uint16_t>(jk, kp, "dst_port");
        f.key.proto = require<std::uint8_t>(jk, kp, "proto");
    }
    if (jf.contains("reverse_path"))
        f.reverse_path = node_list(jf.at("reverse_path"), path + ".reverse_path");
    return f;
}

}  // namespace

std::vector<FlowSpec> Scenario::materialize_flows() const {
    if (flow_gen) {
        Xoshiro256 rng(derive_seed(seed, /*tag=*/0xF10C5EEDULL));
        return generate_flows(*flow_gen, duration, rng);
    }
    return flows;
}

void Scenario::validate() const {
    if (v < 1 || v > 8) throw ConfigError("v", "must be in [1, 8]");
    if (bf_cells < 1) throw ConfigError("bf_k", "must be >= 1");
    if (hash_count < 1) throw ConfigError("hash_count", "must be >= 1");
    if (!(duration > 0.0)) throw ConfigError("duration", "must be > 0");
    if (default_loss < 0.0 || default_loss > 1.0)
        throw ConfigError("loss.default", "must be in [0, 1]");
    for (std::size_t i = 0; i < link_loss.size(); ++i) {
        const LinkLoss& l = link_loss[i];
        std::string path = "loss.links[" + std::to_string(i) + "]";
        if (!topology.has_edge(l.a, l.b))
            throw ConfigError(path, "no such link " + std::to_string(l.a) +
                                        "-" + std::to_string(l.b));
        if (l.prob < 0.0 || l.prob > 1.0)
            throw ConfigError(path, "probability must be in [0, 1]");
    }
    if (topology.nodes().empty())
        throw ConfigError("topology", "no edges defined");
    if (flows.empty() && !flow_gen)
        throw ConfigError("flows", "either flows or flow_gen is required");
    if (!flows.empty() && flow_gen)
        throw ConfigError("flows", "flows and flow_gen are mutually exclusive");
    if (flow_gen) {
        for (std::size_t i = 0; i < flow_gen->src_pool.size(); ++i)
            if (!topology.has_node(flow_gen->src_pool[i]))
                throw ConfigError("flow_gen.src_pool[" + std::to_string(i) + "]",
                                  "node not in topology");
        for (std::size_t i = 0; i < flow_gen->dst_pool.size(); ++i)
            if (!topology.has_node(flow_gen->dst_pool[i]))
                throw ConfigError("flow_gen.dst_pool[" + std::to_string(i) + "]",
                                  "node not in topology");
    }

    auto check_flow = [&](const FlowSpec& f, const std::string& path) {
        if (!topology.has_node(f.src_node))
            throw ConfigError(path + ".src_node", "node not in topology");
        if (!topology.has_node(f.dst_node))
            throw ConfigError(path + ".dst_node", "node not in topology");
        if (f.src_node == f.dst_node)
            throw ConfigError(path + ".dst_node", "must differ from src_node");
        if (f.size_packets < 1)
            throw ConfigError(path + ".size_packets", "must be >= 1");
        if (!(f.inter_packet_gap > 0.0))
            throw ConfigError(path + ".inter_packet_gap", "must be > 0");
        if (f.start < 0.0)
            throw ConfigError(path + ".start", "must be >= 0");
        if (f.reverse_path) {
            const auto& rp = *f.reverse_path;
            std::string rp_path = path + ".reverse_path";
            if (rp.size() < 2) throw ConfigError(rp_path, "needs >= 2 nodes");
            for (std::size_t i = 0; i + 1 < rp.size(); ++i)
                if (!topology.has_edge(rp[i], rp[i + 1]))
                    throw ConfigError(rp_path,
                                      "nodes " + std::to_string(rp[i]) + "-" +
                                          std::to_string(rp[i + 1]) +
                                          " are not adjacent");
            if (rp.front() != f.dst_node)
                throw ConfigError(rp_path,
                                  "must start at the flow's sink side");
        }
    };
    for (std::size_t i = 0; i < flows.size(); ++i)
        check_flow(flows[i], "flows[" + std::to_string(i) + "]");

    if (update) {
        if (!(update->time > 0.0))
            throw ConfigError("update.time", "must be > 0");
        for (std::size_t i = 0; i < update->removed_links.size(); ++i) {
            const auto& [a, b] = update->removed_links[i];
            if (!topology.has_edge(a, b))
                throw ConfigError(
                    "update.removed_links[" + std::to_string(i) + "]",
                    "no such link");
        }
        std::size_t flow_count =
            flow_gen ? flow_gen->flow_count : flows.size();
        for (std::size_t i = 0; i < update->alternate_paths.size(); ++i) {
            const auto& [idx, path] = update->alternate_paths[i];
            std::string p =
                "update.alternate_paths[" + std::to_string(i) + "]";
            if (idx >= flow_count)
                throw ConfigError(p + ".flow", "flow index out of range");
            if (path.size() < 2) throw ConfigError(p + ".path", "needs >= 2 nodes");
            for (std::size_t k = 0; k + 1 < path.size(); ++k)
                if (!topology.has_edge(path[k], path[k + 1]))
                    throw ConfigError(
                        p + ".path", "nodes " + std::to_string(path[k]) + "-" +
                                         std::to_string(path[k + 1]) +
                                         " are not adjacent");
        }
    }
}

Scenario scenario_from_json_text(const std::string& text,
                                 const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("", "top level must be an object");

    reject_unknown_keys(
        j, "",
        {"topology", "scheme", "v", "bf_k", "hash_count", "seed", "duration",
         "loss", "update", "trace_reverse", "dedup_at_sink", "watchdog",
         "watchdog_threshold", "ack_every", "flows", "flow_gen",
         "detection_mode"});

    Scenario s;

    const json& jt = require<json>(j, "", "topology");
    reject_unknown_keys(jt, "topology", {"file", "edges"});
    if (jt.contains("file") == jt.contains("edges"))
        throw ConfigError("topology", "exactly one of file/edges is required");
    if (jt.contains("file")) {
        std::filesystem::path p(require<std::string>(jt, "topology", "file"));
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        s.topology = Topology::load(p.string());
    } else {
        std::vector<Edge> edges;
        const json& je = jt.at("edges");
        if (!je.is_array()) throw ConfigError("topology.edges", "expected array");
        for (const auto& e : je) {
            if (!e.is_array() || e.size() != 3)
                throw ConfigError("topology.edges",
                                  "each edge is [a, b, latency_seconds]");
            edges.push_back({e[0].get<SwitchId>(), e[1].get<SwitchId>(),
                             e[2].get<double>()});
        }
        s.topology = Topology(edges);
    }

    s.scheme = wire::scheme_from_name(require<std::string>(j, "", "scheme"));
    s.v = optional_or<std::uint32_t>(j, "", "v", 1);
    s.bf_cells = optional_or<std::size_t>(j, "", "bf_k", 65536);
    s.hash_count = optional_or<std::size_t>(j, "", "hash_count", 1);
    s.seed = optional_or<std::uint64_t>(j, "", "seed", 1);
    s.duration = require<double>(j, "", "duration");

    if (j.contains("loss")) {
        const json& jl = j.at("loss");
        if (jl.is_number()) {
            s.default_loss = jl.get<double>();
        } else {
            reject_unknown_keys(jl, "loss", {"default", "links"});
            s.default_loss = optional_or<double>(jl, "loss", "default", 0.0);
            if (jl.contains("links")) {
                for (const auto& e : jl.at("links")) {
                    if (!e.is_array() || e.size() != 3)
                        throw ConfigError("loss.links",
                                          "each entry is [a, b, probability]");
                    s.link_loss.push_back({e[0].get<SwitchId>(),
                                           e[1].get<SwitchId>(),
                                           e[2].get<double>()});
                }
            }
        }
    }

    if (j.contains("update")) {
        const json& ju = j.at("update");
        reject_unknown_keys(ju, "update",
                            {"time", "removed_links", "alternate_paths"});
        UpdatePlan plan;
        plan.time = require<double>(ju, "update", "time");
        if (ju.contains("removed_links")) {
            for (const auto& e : ju.at("removed_links")) {
                if (!e.is_array() || e.size() != 2)
                    throw ConfigError("update.removed_links",
                                      "each entry is [a, b]");
                plan.removed_links.emplace_back(e[0].get<SwitchId>(),
                                                e[1].get<SwitchId>());
            }
        }
        if (ju.contains("alternate_paths")) {
            const json& ja = ju.at("alternate_paths");
            for (std::size_t i = 0; i < ja.size(); ++i) {
                std::string p =
                    "update.alternate_paths[" + std::to_string(i) + "]";
                if (!ja[i].is_object()) throw ConfigError(p, "expected an object");
                reject_unknown_keys(ja[i], p, {"flow", "path"});
                plan.alternate_paths.emplace_back(
                    require<std::size_t>(ja[i], p, "flow"),
                    node_list(ja[i].at("path"), p + ".path"));
            }
        }
        s.update = std::move(plan);
    }

    s.trace_reverse = optional_or<bool>(j, "", "trace_reverse", false);
    s.dedup_at_sink = optional_or<bool>(j, "", "dedup_at_sink", false);
    s.watchdog = optional_or<bool>(j, "", "watchdog", false);
    s.watchdog_threshold =
        optional_or<std::uint32_t>(j, "", "watchdog_threshold", 64);
    s.ack_every = optional_or<std::uint32_t>(j, "", "ack_every", 1);

    std::string mode =
        optional_or<std::string>(j, "", "detection_mode", "whole");
    if (mode == "whole")
        s.detection_mode = collect::DetectionMode::WholeTrace;
    else if (mode == "early")
        s.detection_mode = collect::DetectionMode::Early;
    else
        throw ConfigError("detection_mode", "must be 'whole' or 'early'");

    if (j.contains("flows")) {
        const json& jf = j.at("flows");
        if (!jf.is_array()) throw ConfigError("flows", "expected array");
        for (std::size_t i = 0; i < jf.size(); ++i)
            s.flows.push_back(
                parse_flow(jf[i], "flows[" + std::to_string(i) + "]"));
    }
    if (j.contains("flow_gen")) {
        const json& jg = j.at("flow_gen");
        reject_unknown_keys(jg, "flow_gen",
                            {"flow_count", "zipf_exponent", "inter_packet_gap",
                             "payload_bytes", "src_pool", "dst_pool"});
        FlowGenParams g;
        g.flow_count = require<std::uint32_t>(jg, "flow_gen", "flow_count");
        g.zipf_exponent =
            optional_or<double>(jg, "flow_gen", "zipf_exponent", 1.2);
        g.inter_packet_gap =
            optional_or<double>(jg, "flow_gen", "inter_packet_gap", 0.01);
        g.payload_bytes =
            optional_or<std::uint32_t>(jg, "flow_gen", "payload_bytes", 512);
        g.src_pool = node_list(require<json>(jg, "flow_gen", "src_pool"),
                               "flow_gen.src_pool");
        g.dst_pool = node_list(require<json>(jg, "flow_gen", "dst_pool"),
                               "flow_gen.dst_pool");
        s.flow_gen = std::move(g);
    }

    s.validate();
    return s;
}

Scenario scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_json_text(
        buf.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace lint::sim
