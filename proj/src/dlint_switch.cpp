#include "lint/dlint_switch.hpp"

namespace lint::dlint {

using bloom::TelemetryState;
using wire::DlintHeader;
using wire::Packet;
using wire::SlotValue;

DlintSwitch::DlintSwitch(wire::SwitchId id, std::uint32_t value_count,
                         std::size_t bf_cells, std::size_t hash_count,
                         std::vector<std::uint64_t> seeds, DlintOptions opts)
    : id_(id),
      v_(value_count),
      store_(bf_cells, hash_count, std::move(seeds)),
      opts_(opts) {
    if (v_ < 1) throw InvariantViolation("DLINT value count must be >= 1");
    (void)SlotValue::switch_id(id_);  // validates the id range
}

DlintHeader& DlintSwitch::header_of(Packet& pkt) const {
    auto* h = std::get_if<DlintHeader>(&*pkt.header);
    if (h == nullptr)
        throw MalformedSlot("packet carries a non-DLINT telemetry header");
    return *h;
}

bool DlintSwitch::contains(const DlintHeader& h, std::uint32_t code) {
    for (const SlotValue& s : h.slots)
        if (s.raw == code) return true;
    return false;
}

int DlintSwitch::first_free_slot(const DlintHeader& h) {
    for (std::size_t i = 0; i < h.slots.size(); ++i)
        if (h.slots[i].is_empty()) return static_cast<int>(i);
    return -1;
}

void DlintSwitch::attach(Packet& pkt, SlotValue first_slot) const {
    DlintHeader h;
    h.slots.assign(v_, SlotValue::empty());
    h.slots[0] = first_slot;
    pkt.header = h;
}

SinkReport DlintSwitch::make_report(const Packet& pkt) const {
    SinkReport r;
    r.flow = pkt.direction == wire::Direction::Forward ? pkt.flow
                                                       : pkt.flow.reversed();
    r.scheme = wire::Scheme::Dlint;
    r.path_len = static_cast<std::uint32_t>(wire::kInitialTtl - pkt.ttl) + 1;
    r.timestamp = pkt.timestamp;
    if (pkt.header) {
        const auto& h = std::get<DlintHeader>(*pkt.header);
        for (const SlotValue& s : h.slots) {
            if (s.is_switch_id())
                r.items.push_back({s.raw, std::nullopt});
            else if (s.is_signal())
                r.signals.push_back(s.raw);
        }
    }
    return r;
}

ForwardAction DlintSwitch::process_forward(Packet& pkt, Role role) {
    if (pkt.direction != wire::Direction::Forward)
        throw InvariantViolation("process_forward requires a FORWARD packet");

    ForwardAction act;
    const wire::FlowKey& flow = pkt.flow;

    // A RESET riding a forward packet belongs to the reverse flow's tracing
    // cycle (trace_reverse mode); it resets that flow's state everywhere it
    // passes.
    bool reset_aboard =
        pkt.header && contains(header_of(pkt), SlotValue::kReset);
    if (reset_aboard) store_.update(flow.reversed(), TelemetryState::AwaitingInit);

    auto set_state = [&](TelemetryState s) {
        store_.update(flow, s);
        act.new_state_code = static_cast<std::uint8_t>(s);
    };

    TelemetryState state = store_.lookup(flow);

    switch (role) {
        case Role::Source: {
            if (pkt.header)
                throw UnexpectedHeaderAtSource(
                    "forward packet already carries a header at its source");

            // Piggyback a pending reverse-cycle RESET; it takes precedence
            // over this switch's own insertion for this packet.
            if (opts_.trace_reverse && reset_armed_.erase(flow.reversed()) > 0) {
                attach(pkt, SlotValue::reset());
                act.attached_header = true;
                store_.update(flow.reversed(), TelemetryState::AwaitingInit);
                bare_streak_.erase(flow);
                return act;
            }

            if (state == TelemetryState::AwaitingInit) {
                attach(pkt, SlotValue::init());
                act.attached_header = true;
                if (v_ > 1) {
                    header_of(pkt).slots[1] = SlotValue::switch_id(id_);
                    act.wrote_slot = true;
                    set_state(TelemetryState::InsertedId);
                } else {
                    set_state(TelemetryState::ReadyToInsert);
                }
                bare_streak_.erase(flow);
            } else if (state == TelemetryState::ReadyToInsert) {
                attach(pkt, SlotValue::switch_id(id_));
                act.attached_header = true;
                act.wrote_slot = true;
                set_state(TelemetryState::InsertedId);
                bare_streak_.erase(flow);
            } else {
                // InsertedId: forward bare until RESET comes back.
                if (opts_.watchdog &&
                    ++bare_streak_[flow] >= opts_.watchdog_threshold) {
                    set_state(TelemetryState::AwaitingInit);
                    bare_streak_.erase(flow);
                }
            }
            break;
        }

        case Role::Transit:
        case Role::Sink: {
            bool completed_here = false;
            if (pkt.header) {
                DlintHeader& h = header_of(pkt);
                bool has_init = contains(h, SlotValue::kInit);
                if (state == TelemetryState::AwaitingInit && !has_init) {
                    // No INIT on an encapsulated packet: assume it was lost.
                    set_state(TelemetryState::ReadyToInsert);
                } else if (state == TelemetryState::AwaitingInit ||
                           state == TelemetryState::ReadyToInsert) {
                    int slot = first_free_slot(h);
                    if (slot >= 0) {
                        h.slots[slot] = SlotValue::switch_id(id_);
                        act.wrote_slot = true;
                        set_state(TelemetryState::InsertedId);
                        completed_here = role == Role::Sink;
                    } else if (state == TelemetryState::AwaitingInit) {
                        set_state(TelemetryState::ReadyToInsert);
                    }
                }
            } else if (state == TelemetryState::ReadyToInsert) {
                if (role == Role::Transit) {
                    attach(pkt, SlotValue::switch_id(id_));
                    act.attached_header = true;
                    act.wrote_slot = true;
                    set_state(TelemetryState::InsertedId);
                } else {
                    // The sink needs no header; its ID goes straight into
                    // the report.
                    set_state(TelemetryState::InsertedId);
                    completed_here = true;
                }
            }

            if (role == Role::Sink) {
                SinkReport r = make_report(pkt);
                r.bare = !pkt.header;
                if (completed_here && !pkt.header)
                    r.items.push_back({id_, std::nullopt});
                r.cycle_complete = completed_here;
                if (completed_here) reset_armed_.insert(flow);
                if (pkt.header) {
                    act.stripped_bytes = wire::header_wire_size(*pkt.header);
                    pkt.header.reset();
                    act.stripped_header = true;
                }
                act.report = std::move(r);
            }
            break;
        }
    }
    return act;
}

ForwardAction DlintSwitch::process_reverse(Packet& pkt, Role reverse_role) {
    if (pkt.direction != wire::Direction::Reverse)
        throw InvariantViolation("process_reverse requires a REVERSE packet");

    ForwardAction act;
    const wire::FlowKey fkey = pkt.flow;            // flow being RESET
    const wire::FlowKey rkey = pkt.flow.reversed(); // flow traced in reverse

    bool reset_aboard =
        pkt.header && contains(header_of(pkt), SlotValue::kReset);
    if (reset_aboard) store_.update(fkey, TelemetryState::AwaitingInit);

    if (reverse_role == Role::Source) {
        // First reverse hop: the forward sink. Emit a pending RESET; it
        // takes the first slot and displaces this switch's own reverse-trace
        // insertion for this packet.
        if (pkt.header)
            throw UnexpectedHeaderAtSource(
                "reverse packet already carries a header at its first hop");
        if (reset_armed_.erase(fkey) > 0) {
            attach(pkt, SlotValue::reset());
            act.attached_header = true;
            store_.update(fkey, TelemetryState::AwaitingInit);
            return act;
        }
        if (!opts_.trace_reverse) return act;
    }

    if (!opts_.trace_reverse) {
        // RESET relay only: transits forward it, the last hop consumes it.
        if (reset_aboard && reverse_role == Role::Sink) {
            pkt.header.reset();
            act.stripped_header = true;
        }
        return act;
    }

    // Bidirectional tracing: run the forward machine for the reverse flow's
    // own key, with the reverse roles (the forward sink acts as source).
    TelemetryState state = store_.lookup(rkey);
    auto set_state = [&](TelemetryState s) {
        store_.update(rkey, s);
        act.new_state_code = static_cast<std::uint8_t>(s);
    };

    switch (reverse_role) {
        case Role::Source: {
            if (state == TelemetryState::AwaitingInit) {
                attach(pkt, SlotValue::init());
                act.attached_header = true;
                if (v_ > 1) {
                    header_of(pkt).slots[1] = SlotValue::switch_id(id_);
                    act.wrote_slot = true;
                    set_state(TelemetryState::InsertedId);
                } else {
                    set_state(TelemetryState::ReadyToInsert);
                }
            } else if (state == TelemetryState::ReadyToInsert) {
                attach(pkt, SlotValue::switch_id(id_));
                act.attached_header = true;
                act.wrote_slot = true;
                set_state(TelemetryState::InsertedId);
            }
            break;
        }
        case Role::Transit:
        case Role::Sink: {
            bool completed_here = false;
            if (pkt.header) {
                DlintHeader& h = header_of(pkt);
                bool has_init = contains(h, SlotValue::kInit);
                if (state == TelemetryState::AwaitingInit && !has_init) {
                    set_state(TelemetryState::ReadyToInsert);
                } else if (state == TelemetryState::AwaitingInit ||
                           state == TelemetryState::ReadyToInsert) {
                    int slot = first_free_slot(h);
                    if (slot >= 0) {
                        h.slots[slot] = SlotValue::switch_id(id_);
                        act.wrote_slot = true;
                        set_state(TelemetryState::InsertedId);
                        completed_here = reverse_role == Role::Sink;
                    } else if (state == TelemetryState::AwaitingInit) {
                        set_state(TelemetryState::ReadyToInsert);
                    }
                }
            } else if (state == TelemetryState::ReadyToInsert) {
                if (reverse_role == Role::Transit) {
                    attach(pkt, SlotValue::switch_id(id_));
                    act.attached_header = true;
                    act.wrote_slot = true;
                    set_state(TelemetryState::InsertedId);
                } else {
                    set_state(TelemetryState::InsertedId);
                    completed_here = true;
                }
            }

            if (reverse_role == Role::Sink) {
                SinkReport r = make_report(pkt);
                r.bare = !pkt.header;
                if (completed_here && !pkt.header)
                    r.items.push_back({id_, std::nullopt});
                r.cycle_complete = completed_here;
                if (completed_here) reset_armed_.insert(rkey);
                if (pkt.header) {
                    act.stripped_bytes = wire::header_wire_size(*pkt.header);
                    pkt.header.reset();
                    act.stripped_header = true;
                }
                act.report = std::move(r);
            }
            break;
        }
    }
    return act;
}

}  // namespace lint::dlint
