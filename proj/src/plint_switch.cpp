#include "lint/plint_switch.hpp"

namespace lint::plint {

using wire::Packet;
using wire::PlintHeader;
using wire::PlintSlot;

std::uint32_t hop_index(std::uint8_t ttl, std::uint8_t init_ttl) {
    if (ttl > init_ttl)
        throw TtlInversion("packet TTL " + std::to_string(ttl) +
                           " exceeds initTTL " + std::to_string(init_ttl));
    return static_cast<std::uint32_t>(init_ttl - ttl) + 1;
}

PlintSwitch::PlintSwitch(wire::SwitchId id, std::uint32_t value_count,
                         std::uint64_t rng_seed, bool dedup_at_sink)
    : id_(id), v_(value_count), dedup_at_sink_(dedup_at_sink), rng_(rng_seed) {
    if (v_ < 1) throw InvariantViolation("PLINT value count must be >= 1");
    (void)wire::SlotValue::switch_id(id_);
}

ForwardAction PlintSwitch::process_forward(Packet& pkt, Role role) {
    if (pkt.direction != wire::Direction::Forward)
        throw InvariantViolation("PLINT processes forward packets only");

    ForwardAction act;

    if (role == Role::Source) {
        if (pkt.header)
            throw UnexpectedHeaderAtSource(
                "forward packet already carries a header at its source");
        PlintHeader h;
        h.init_ttl = pkt.ttl;
        h.slots.assign(v_, PlintSlot{id_, 1});
        pkt.header = h;
        act.attached_header = true;
        act.wrote_slot = true;
        return act;
    }

    auto* h = std::get_if<PlintHeader>(&*pkt.header);
    if (h == nullptr)
        throw MalformedSlot("packet carries a non-PLINT telemetry header");

    std::uint32_t i = hop_index(pkt.ttl, h->init_ttl);
    for (PlintSlot& slot : h->slots) {
        // One independent uniform per slot per packet.
        double u = rng_.uniform01();
        if (u * i < 1.0) {
            slot.sw_id = id_;
            slot.hop_num = static_cast<std::uint8_t>(i);
            act.wrote_slot = true;
        }
    }

    if (role == Role::Sink) {
        if (dedup_at_sink_ && v_ > 1) {
            // The last hop can repair at most one duplicate: overwrite the
            // first slot whose value also appears earlier.
            for (std::size_t a = 1; a < h->slots.size(); ++a) {
                bool dup = false;
                for (std::size_t b = 0; b < a; ++b)
                    if (h->slots[b].sw_id == h->slots[a].sw_id) { dup = true; break; }
                if (dup) {
                    h->slots[a] = PlintSlot{id_, static_cast<std::uint8_t>(i)};
                    act.wrote_slot = true;
                    break;
                }
            }
        }
        SinkReport r;
        r.flow = pkt.flow;
        r.scheme = wire::Scheme::Plint;
        r.path_len = i;
        r.timestamp = pkt.timestamp;
        for (const PlintSlot& slot : h->slots)
            r.items.push_back({slot.sw_id, slot.hop_num});
        act.stripped_bytes = wire::header_wire_size(*pkt.header);
        pkt.header.reset();
        act.stripped_header = true;
        act.report = std::move(r);
    }
    return act;
}

}  // namespace lint::plint
