#include "lint/baselines.hpp"

#include "lint/plint_switch.hpp"

namespace lint::baseline {

using wire::P4IntHeader;
using wire::Packet;
using wire::PintLiteHeader;

P4IntSwitch::P4IntSwitch(wire::SwitchId id, std::uint32_t value_count)
    : id_(id), v_(value_count) {
    if (v_ < 1) throw InvariantViolation("P4-INT value count must be >= 1");
    (void)wire::SlotValue::switch_id(id_);
}

ForwardAction P4IntSwitch::process_forward(Packet& pkt, Role role) {
    if (pkt.direction != wire::Direction::Forward)
        throw InvariantViolation("P4-INT processes forward packets only");

    ForwardAction act;

    if (role == Role::Source) {
        if (pkt.header)
            throw UnexpectedHeaderAtSource(
                "forward packet already carries a header at its source");
        P4IntHeader h;
        h.value_count = static_cast<std::uint8_t>(v_);
        pkt.header = h;
        act.attached_header = true;
    }

    auto* h = std::get_if<P4IntHeader>(&*pkt.header);
    if (h == nullptr)
        throw MalformedSlot("packet carries a non-P4-INT telemetry header");

    // Entry 0 of the hop group is the switch ID; the remaining v-1 words
    // stand in for other metadata and only their size matters.
    h->stack.push_back(id_);
    for (std::uint32_t k = 1; k < v_; ++k) h->stack.push_back(0);
    h->hop_count++;
    act.wrote_slot = true;

    if (role == Role::Sink) {
        SinkReport r;
        r.flow = pkt.flow;
        r.scheme = wire::Scheme::P4Int;
        r.path_len = h->hop_count;
        r.timestamp = pkt.timestamp;
        for (std::uint32_t hop = 0; hop < h->hop_count; ++hop)
            r.items.push_back({h->stack[static_cast<std::size_t>(hop) * v_],
                               static_cast<std::uint8_t>(hop + 1)});
        r.cycle_complete = true;  // every packet carries a full trace
        act.stripped_bytes = wire::header_wire_size(*pkt.header);
        pkt.header.reset();
        act.stripped_header = true;
        act.report = std::move(r);
    }
    return act;
}

PintLiteSwitch::PintLiteSwitch(wire::SwitchId id, std::uint64_t rng_seed)
    : id_(id), rng_(rng_seed) {
    (void)wire::SlotValue::switch_id(id_);
}

ForwardAction PintLiteSwitch::process_forward(Packet& pkt, Role role) {
    if (pkt.direction != wire::Direction::Forward)
        throw InvariantViolation("PINT-lite processes forward packets only");

    ForwardAction act;

    if (role == Role::Source) {
        if (pkt.header)
            throw UnexpectedHeaderAtSource(
                "forward packet already carries a header at its source");
        pkt.header = PintLiteHeader{id_};
        act.attached_header = true;
        act.wrote_slot = true;
        return act;
    }

    auto* h = std::get_if<PintLiteHeader>(&*pkt.header);
    if (h == nullptr)
        throw MalformedSlot("packet carries a non-PINT-lite telemetry header");

    // Hop index by the same TTL convention as PLINT; the wire format just
    // never conveys it.
    std::uint32_t i = plint::hop_index(pkt.ttl, wire::kInitialTtl);
    double u = rng_.uniform01();
    if (u * i < 1.0) {
        h->sw_id = id_;
        act.wrote_slot = true;
    }

    if (role == Role::Sink) {
        SinkReport r;
        r.flow = pkt.flow;
        r.scheme = wire::Scheme::PintLite;
        r.path_len = i;
        r.timestamp = pkt.timestamp;
        r.items.push_back({h->sw_id, std::nullopt});
        act.stripped_bytes = wire::header_wire_size(*pkt.header);
        pkt.header.reset();
        act.stripped_header = true;
        act.report = std::move(r);
    }
    return act;
}

}  // namespace lint::baseline
