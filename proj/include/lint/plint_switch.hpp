#pragma once

#include <cstdint>

#include "lint/report.hpp"
#include "lint/rng.hpp"
#include "lint/wire.hpp"

namespace lint::plint {

// Hop index of the switch currently holding the packet: 1-based, derived
// from the TTL decrement count since the INT source. `ttl` is the TTL as
// seen on arrival (each switch decrements after INT processing).
std::uint32_t hop_index(std::uint8_t ttl, std::uint8_t init_ttl);

// PLINT switch: reservoir sampling per slot. The source fills every slot
// with its own ID; the switch at hop i overwrites each slot independently
// with probability 1/i, so every switch on an n-hop path ends up owning a
// slot with probability exactly 1/n.
class PlintSwitch {
public:
    PlintSwitch(wire::SwitchId id, std::uint32_t value_count,
                std::uint64_t rng_seed, bool dedup_at_sink = false);

    ForwardAction process_forward(wire::Packet& pkt, Role role);

    wire::SwitchId id() const { return id_; }

private:
    wire::SwitchId id_;
    std::uint32_t v_;
    bool dedup_at_sink_;
    Xoshiro256 rng_;
};

}  // namespace lint::plint
