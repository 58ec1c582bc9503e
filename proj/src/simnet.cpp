#include "lint/simnet.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

#include "lint/baselines.hpp"
#include "lint/dlint_switch.hpp"
#include "lint/plint_switch.hpp"

namespace lint::sim {

namespace {

constexpr std::uint64_t kBfSeedTag = 0xB10053EDULL;
constexpr std::uint64_t kSamplerTag = 0x5A3957EAULL;
constexpr std::uint64_t kLossTag = 0x10550001ULL;

struct InFlight {
    wire::Packet pkt;
    std::vector<SwitchId> path;  // snapshot at emission
    std::size_t hop = 0;
    std::size_t flow_idx = 0;
};

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0;
    enum class Kind : std::uint8_t { Arrival, Emit, Update } kind = Kind::Emit;
    InFlight pkt;          // Arrival
    std::size_t flow = 0;  // Emit
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.seq > b.seq;  // min-heap on (time, seq)
    }
};

class Engine {
public:
    explicit Engine(const Scenario& sc) : sc_(sc) {
        sc_.validate();
        flows_ = sc_.materialize_flows();
        validate_flows();
        build_switches();
        build_loss_table();

        result_.flows = flows_;
        result_.accounting.per_flow.resize(flows_.size());
        result_.ground_truth.routes.resize(flows_.size());
        for (std::size_t i = 0; i < flows_.size(); ++i) {
            routes_.push_back(initial_route(i));
            result_.ground_truth.routes[i].push_back({0.0, routes_[i]});
        }

        if (sc_.update) {
            Event up;
            up.time = sc_.update->time;
            up.kind = Event::Kind::Update;
            schedule(std::move(up));
        }
        for (std::size_t i = 0; i < flows_.size(); ++i) {
            Event ev;
            ev.time = flows_[i].start;
            ev.kind = Event::Kind::Emit;
            ev.flow = i;
            schedule(std::move(ev));
        }
    }

    RunResult run() {
        while (!heap_.empty()) {
            std::pop_heap(heap_.begin(), heap_.end(), EventAfter{});
            Event ev = std::move(heap_.back());
            heap_.pop_back();
            switch (ev.kind) {
                case Event::Kind::Emit: on_emit(ev); break;
                case Event::Kind::Arrival: on_arrival(ev); break;
                case Event::Kind::Update: on_update(ev.time); break;
            }
        }
        return std::move(result_);
    }

private:
    void validate_flows() {
        for (std::size_t i = 0; i < flows_.size(); ++i) {
            const FlowSpec& f = flows_[i];
            std::string path = "flows[" + std::to_string(i) + "]";
            if (!sc_.topology.has_node(f.src_node))
                throw ConfigError(path + ".src_node", "node not in topology");
            if (!sc_.topology.has_node(f.dst_node))
                throw ConfigError(path + ".dst_node", "node not in topology");
            if (f.reverse_path && f.reverse_path->size() > 63)
                throw ConfigError(path + ".reverse_path",
                                  "path longer than the TTL budget");
        }
        if (sc_.update) {
            for (std::size_t k = 0; k < sc_.update->alternate_paths.size();
                 ++k) {
                const auto& [idx, alt] = sc_.update->alternate_paths[k];
                std::string path =
                    "update.alternate_paths[" + std::to_string(k) + "].path";
                if (idx >= flows_.size())
                    throw ConfigError(path, "flow index out of range");
                if (alt.size() > 63)
                    throw ConfigError(path, "path longer than the TTL budget");
                if (alt.front() != flows_[idx].src_node ||
                    alt.back() != flows_[idx].dst_node)
                    throw ConfigError(path,
                                      "endpoints do not match the flow");
            }
        }
    }

    std::vector<SwitchId> initial_route(std::size_t i) {
        const FlowSpec& f = flows_[i];
        try {
            auto r = sc_.topology.route(f.src_node, f.dst_node);
            if (r.size() > 63)
                throw ConfigError("flows[" + std::to_string(i) + "]",
                                  "path longer than the TTL budget");
            return r;
        } catch (const Unreachable& e) {
            throw ConfigError("flows[" + std::to_string(i) + "]", e.what());
        }
    }

    void build_switches() {
        std::vector<std::uint64_t> bf_seeds;
        for (std::size_t k = 0; k < sc_.hash_count; ++k)
            bf_seeds.push_back(derive_seed(sc_.seed, kBfSeedTag, k));

        for (SwitchId node : sc_.topology.nodes()) {
            switch (sc_.scheme) {
                case wire::Scheme::Dlint: {
                    dlint::DlintOptions opts;
                    opts.trace_reverse = sc_.trace_reverse;
                    opts.watchdog = sc_.watchdog;
                    opts.watchdog_threshold = sc_.watchdog_threshold;
                    dlint_.emplace(node, dlint::DlintSwitch(
                                             node, sc_.v, sc_.bf_cells,
                                             sc_.hash_count, bf_seeds, opts));
                    break;
                }
                case wire::Scheme::Plint:
                    plint_.emplace(node, plint::PlintSwitch(
                                             node, sc_.v,
                                             derive_seed(sc_.seed, kSamplerTag,
                                                         node),
                                             sc_.dedup_at_sink));
                    break;
                case wire::Scheme::P4Int:
                    p4int_.emplace(node, baseline::P4IntSwitch(node, sc_.v));
                    break;
                case wire::Scheme::PintLite:
                    pintlite_.emplace(node, baseline::PintLiteSwitch(
                                                node, derive_seed(sc_.seed,
                                                                  kSamplerTag,
                                                                  node)));
                    break;
            }
        }
        loss_rng_ = std::make_unique<Xoshiro256>(derive_seed(sc_.seed, kLossTag));
    }

    void build_loss_table() {
        for (const LinkLoss& l : sc_.link_loss)
            loss_[key_of(l.a, l.b)] = l.prob;
    }

    static std::uint64_t key_of(SwitchId a, SwitchId b) {
        SwitchId lo = std::min(a, b), hi = std::max(a, b);
        return (static_cast<std::uint64_t>(hi) << 32) | lo;
    }

    double loss_prob(SwitchId a, SwitchId b) const {
        auto it = loss_.find(key_of(a, b));
        return it == loss_.end() ? sc_.default_loss : it->second;
    }

    void schedule(Event ev) {
        ev.seq = next_seq_++;
        heap_.push_back(std::move(ev));
        std::push_heap(heap_.begin(), heap_.end(), EventAfter{});
    }

    void on_emit(const Event& ev) {
        FlowSpec& f = flows_[ev.flow];
        FlowAccounting& acc = result_.accounting.per_flow[ev.flow];
        if (acc.emitted >= f.size_packets || ev.time >= sc_.duration) return;

        InFlight infl;
        infl.flow_idx = ev.flow;
        infl.path = routes_[ev.flow];
        infl.pkt.flow = f.key;
        infl.pkt.direction = wire::Direction::Forward;
        infl.pkt.ttl = wire::kInitialTtl;
        infl.pkt.seq = ++acc.emitted;
        infl.pkt.payload_bytes = f.payload_bytes;
        infl.pkt.timestamp = ev.time;

        Event arrival;
        arrival.time = ev.time;
        arrival.kind = Event::Kind::Arrival;
        arrival.pkt = std::move(infl);
        schedule(std::move(arrival));

        if (acc.emitted < f.size_packets) {
            Event next;
            next.time = ev.time + f.inter_packet_gap;
            next.kind = Event::Kind::Emit;
            next.flow = ev.flow;
            if (next.time < sc_.duration) schedule(std::move(next));
        }
    }

    void on_arrival(Event& ev) {
        InFlight& infl = ev.pkt;
        SwitchId node = infl.path[infl.hop];
        infl.pkt.timestamp = ev.time;

        Role role = infl.hop == 0 ? Role::Source
                    : infl.hop + 1 == infl.path.size() ? Role::Sink
                                                       : Role::Transit;

        ForwardAction act = process(node, infl.pkt, role);
        if (act.report) {
            if (infl.pkt.direction == wire::Direction::Forward &&
                role == Role::Sink) {
                result_.accounting.forward_sink_packets++;
                result_.accounting.header_bytes_at_sink += act.stripped_bytes;
                if (act.stripped_bytes == 0)
                    result_.accounting.bare_sink_packets++;
            }
            result_.reports.push_back(std::move(*act.report));
        }

        infl.pkt.ttl--;  // decremented once per traversed switch

        FlowAccounting& acc = result_.accounting.per_flow[infl.flow_idx];
        bool forward = infl.pkt.direction == wire::Direction::Forward;

        if (infl.hop + 1 == infl.path.size()) {
            // Delivered to the attached host.
            if (forward) {
                acc.delivered++;
                maybe_echo_ack(infl, ev.time);
            } else {
                acc.acks_delivered++;
            }
            return;
        }

        SwitchId next = infl.path[infl.hop + 1];
        double p = loss_prob(node, next);
        if (p > 0.0 && loss_rng_->uniform01() < p) {
            if (forward)
                acc.dropped++;
            else
                acc.acks_dropped++;
            return;
        }

        Event hop;
        hop.time = ev.time + sc_.topology.latency(node, next);
        hop.kind = Event::Kind::Arrival;
        hop.pkt = std::move(infl);
        hop.pkt.hop++;
        schedule(std::move(hop));
    }

    void maybe_echo_ack(const InFlight& data, double now) {
        if (sc_.ack_every == 0) return;
        FlowAccounting& acc = result_.accounting.per_flow[data.flow_idx];
        if (acc.delivered % sc_.ack_every != 0) return;

        const FlowSpec& f = flows_[data.flow_idx];
        std::vector<SwitchId> rpath;
        if (f.reverse_path) {
            rpath = *f.reverse_path;
        } else {
            rpath = routes_[data.flow_idx];  // current route, reversed
            std::reverse(rpath.begin(), rpath.end());
        }

        InFlight ack;
        ack.flow_idx = data.flow_idx;
        ack.path = std::move(rpath);
        ack.pkt.flow = f.key;  // reverse packets keep the forward key
        ack.pkt.direction = wire::Direction::Reverse;
        ack.pkt.ttl = wire::kInitialTtl;
        ack.pkt.seq = ++acc.acks_emitted;
        ack.pkt.payload_bytes = 0;
        ack.pkt.timestamp = now;

        Event ev;
        ev.time = now;
        ev.kind = Event::Kind::Arrival;
        ev.pkt = std::move(ack);
        schedule(std::move(ev));
    }

    void on_update(double now) {
        if (!sc_.update) return;
        Topology updated = sc_.topology.without_links(sc_.update->removed_links);
        result_.ground_truth.update_time = now;

        for (std::size_t i = 0; i < flows_.size(); ++i) {
            std::vector<SwitchId> next_route;
            bool explicit_path = false;
            for (const auto& [idx, path] : sc_.update->alternate_paths) {
                if (idx == i) {
                    next_route = path;
                    explicit_path = true;
                    break;
                }
            }
            if (!explicit_path) {
                if (sc_.update->removed_links.empty()) continue;
                try {
                    next_route =
                        updated.route(flows_[i].src_node, flows_[i].dst_node);
                } catch (const Unreachable&) {
                    continue;  // flow keeps its old (now broken) route
                }
            }
            if (next_route == routes_[i]) continue;
            routes_[i] = next_route;
            result_.ground_truth.routes[i].push_back({now, next_route});
            result_.ground_truth.updated_flows.push_back(i);
        }
    }

    ForwardAction process(SwitchId node, wire::Packet& pkt, Role role) {
        ForwardAction act;
        switch (sc_.scheme) {
            case wire::Scheme::Dlint: {
                auto& sw = dlint_.at(node);
                act = pkt.direction == wire::Direction::Forward
                          ? sw.process_forward(pkt, role)
                          : sw.process_reverse(pkt, role);
                break;
            }
            case wire::Scheme::Plint:
                if (pkt.direction == wire::Direction::Forward)
                    act = plint_.at(node).process_forward(pkt, role);
                break;
            case wire::Scheme::P4Int:
                if (pkt.direction == wire::Direction::Forward)
                    act = p4int_.at(node).process_forward(pkt, role);
                break;
            case wire::Scheme::PintLite:
                if (pkt.direction == wire::Direction::Forward)
                    act = pintlite_.at(node).process_forward(pkt, role);
                break;
        }
        return act;
    }

    Scenario sc_;
    std::vector<FlowSpec> flows_;
    std::vector<std::vector<SwitchId>> routes_;  // current route per flow

    std::unordered_map<SwitchId, dlint::DlintSwitch> dlint_;
    std::unordered_map<SwitchId, plint::PlintSwitch> plint_;
    std::unordered_map<SwitchId, baseline::P4IntSwitch> p4int_;
    std::unordered_map<SwitchId, baseline::PintLiteSwitch> pintlite_;

    std::unordered_map<std::uint64_t, double> loss_;
    std::unique_ptr<Xoshiro256> loss_rng_;

    std::vector<Event> heap_;
    std::uint64_t next_seq_ = 0;
    RunResult result_;
};

}  // namespace

const std::vector<SwitchId>& GroundTruth::path_at(std::size_t flow,
                                                  double t) const {
    const auto& history = routes.at(flow);
    const std::vector<SwitchId>* best = &history.front().path;
    for (const RouteChange& rc : history) {
        if (rc.time <= t)
            best = &rc.path;
        else
            break;
    }
    return *best;
}

RunResult run(const Scenario& scenario) { return Engine(scenario).run(); }

}  // namespace lint::sim
