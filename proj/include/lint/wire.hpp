#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lint/errors.hpp"

namespace lint::wire {

using SwitchId = std::uint32_t;
using Bytes = std::vector<std::uint8_t>;

enum class Scheme : std::uint8_t { Dlint, Plint, P4Int, PintLite };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// Initial TTL stamped on every emitted packet. Only TTL differences carry
// meaning (PLINT hop indexing), so the constant is arbitrary.
inline constexpr std::uint8_t kInitialTtl = 64;

// 5-tuple identity of a monitored flow; 13 bytes on the wire, and the hash
// input for the per-switch telemetry state lookup.
struct FlowKey {
    std::uint32_t src_addr = 0;
    std::uint32_t dst_addr = 0;
    std::uint16_t src_port = 0;
    std::uint16_t dst_port = 0;
    std::uint8_t proto = 0;

    bool operator==(const FlowKey&) const = default;

    std::array<std::uint8_t, 13> serialize() const;

    // The ACK direction seen as its own flow.
    FlowKey reversed() const {
        return FlowKey{dst_addr, src_addr, dst_port, src_port, proto};
    }
};

struct FlowKeyHash {
    std::size_t operator()(const FlowKey& k) const;
};

// One 4-byte telemetry value slot: a switch ID or a coordination signal.
// The signal codes live at the top of the 32-bit space so a slot stays
// exactly 4 bytes.
struct SlotValue {
    std::uint32_t raw = 0;

    static constexpr std::uint32_t kEmpty = 0x00000000;
    static constexpr std::uint32_t kInit = 0xFFFFFFFF;
    static constexpr std::uint32_t kReset = 0xFFFFFFFE;
    static constexpr std::uint32_t kProbe = 0xFFFFFFFD;
    static constexpr std::uint32_t kMaxSwitchId = 0xFFFFFFF0;

    static SlotValue empty() { return {kEmpty}; }
    static SlotValue init() { return {kInit}; }
    static SlotValue reset() { return {kReset}; }
    static SlotValue probe() { return {kProbe}; }
    static SlotValue switch_id(SwitchId id);

    bool is_empty() const { return raw == kEmpty; }
    bool is_signal() const {
        return raw == kInit || raw == kReset || raw == kProbe;
    }
    bool is_switch_id() const { return raw >= 1 && raw <= kMaxSwitchId; }
    bool is_valid() const { return is_empty() || is_signal() || is_switch_id(); }

    bool operator==(const SlotValue&) const = default;
};

// DLINT header: v fixed slots, 4v bytes, independent of path length.
struct DlintHeader {
    std::vector<SlotValue> slots;

    std::uint32_t value_count() const {
        return static_cast<std::uint32_t>(slots.size());
    }
    bool operator==(const DlintHeader&) const = default;
};

struct PlintSlot {
    SwitchId sw_id = 0;
    std::uint8_t hop_num = 0;
    bool operator==(const PlintSlot&) const = default;
};

// PLINT header: initTTL snapshot plus v (swID, hopNum) pairs; 1 + 5v bytes.
struct PlintHeader {
    std::uint8_t init_ttl = 0;
    std::vector<PlintSlot> slots;

    std::uint32_t value_count() const {
        return static_cast<std::uint32_t>(slots.size());
    }
    bool operator==(const PlintHeader&) const = default;
};

// Classic hop-append INT (MD mode): a 16-byte metadata shim followed by a
// stack that grows by v 4-byte entries per hop. Entry 0 of each hop group is
// the switch ID; the rest are opaque zero-filled metadata words.
struct P4IntHeader {
    std::uint8_t version = 1;
    std::uint8_t value_count = 1;            // v
    std::uint16_t hop_count = 0;             // h
    std::uint32_t instruction_bitmap = 0x80000000u;
    std::vector<std::uint32_t> stack;        // v * h entries, path order

    bool operator==(const P4IntHeader&) const = default;
};

// Reservoir baseline without hop numbers: a bare 4-byte switch ID.
struct PintLiteHeader {
    SwitchId sw_id = 0;
    bool operator==(const PintLiteHeader&) const = default;
};

using TelemetryHeader =
    std::variant<DlintHeader, PlintHeader, P4IntHeader, PintLiteHeader>;

Scheme scheme_of(const TelemetryHeader& h);

enum class Direction : std::uint8_t { Forward, Reverse };

// The simulated packet. Header presence is explicit packet metadata; the
// in-band mechanism for marking a packet as INT-carrying is out of scope.
struct Packet {
    FlowKey flow;
    Direction direction = Direction::Forward;
    std::uint8_t ttl = kInitialTtl;
    std::uint64_t seq = 0;  // per-flow emission sequence
    std::uint32_t payload_bytes = 0;
    std::optional<TelemetryHeader> header;
    double timestamp = 0.0;  // simulated seconds
};

// Big-endian serialization. Throws InvariantViolation when a slot holds a
// value outside its type's domain.
Bytes encode_header(const TelemetryHeader& h);

// Round-trip inverse of encode_header. Throws TruncatedHeader on any length
// inconsistent with (scheme, v); MalformedSlot on value-domain violations
// (e.g., a PLINT slot carrying a signal code).
TelemetryHeader decode_header(const Bytes& bytes, Scheme scheme,
                              std::uint32_t v);

// Per-scheme header size after `hops` hops with `v` telemetry values.
// DLINT -> 4v, PLINT -> 1+5v, P4-INT -> 16+4*v*hops, PINT-lite -> 4.
std::size_t overhead_bytes(Scheme scheme, std::uint32_t hops, std::uint32_t v);

// Size of a concrete header instance as encoded.
std::size_t header_wire_size(const TelemetryHeader& h);

std::string to_hex(const Bytes& b);
Bytes from_hex(const std::string& hex);

}  // namespace lint::wire
