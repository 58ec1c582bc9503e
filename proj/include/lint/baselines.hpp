#pragma once

#include <cstdint>

#include "lint/report.hpp"
#include "lint/rng.hpp"
#include "lint/wire.hpp"

namespace lint::baseline {

// Classic hop-append INT in MD mode: every switch pushes v entries, the sink
// reports the whole stack. Zero aggregation; the reference oracle for the
// collectors.
class P4IntSwitch {
public:
    P4IntSwitch(wire::SwitchId id, std::uint32_t value_count);

    ForwardAction process_forward(wire::Packet& pkt, Role role);

    wire::SwitchId id() const { return id_; }

private:
    wire::SwitchId id_;
    std::uint32_t v_;
};

// Reservoir-sampling baseline without hop numbers: samples exactly like
// PLINT with v = 1 (identical draws under identical seeds) but conveys only
// the bare switch ID.
class PintLiteSwitch {
public:
    PintLiteSwitch(wire::SwitchId id, std::uint64_t rng_seed);

    ForwardAction process_forward(wire::Packet& pkt, Role role);

    wire::SwitchId id() const { return id_; }

private:
    wire::SwitchId id_;
    Xoshiro256 rng_;
};

}  // namespace lint::baseline
