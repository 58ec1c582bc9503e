#include "lint/wire.hpp"

#include <cstdio>

#include "lint/hash.hpp"

namespace lint::wire {

namespace {

void put_u8(Bytes& out, std::uint8_t x) { out.push_back(x); }

void put_u16(Bytes& out, std::uint16_t x) {
    out.push_back(static_cast<std::uint8_t>(x >> 8));
    out.push_back(static_cast<std::uint8_t>(x));
}

void put_u32(Bytes& out, std::uint32_t x) {
    out.push_back(static_cast<std::uint8_t>(x >> 24));
    out.push_back(static_cast<std::uint8_t>(x >> 16));
    out.push_back(static_cast<std::uint8_t>(x >> 8));
    out.push_back(static_cast<std::uint8_t>(x));
}

std::uint16_t get_u16(const Bytes& b, std::size_t off) {
    return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

std::uint32_t get_u32(const Bytes& b, std::size_t off) {
    return (static_cast<std::uint32_t>(b[off]) << 24) |
           (static_cast<std::uint32_t>(b[off + 1]) << 16) |
           (static_cast<std::uint32_t>(b[off + 2]) << 8) |
           static_cast<std::uint32_t>(b[off + 3]);
}

}  // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Dlint: return "DLINT";
        case Scheme::Plint: return "PLINT";
        case Scheme::P4Int: return "P4INT";
        case Scheme::PintLite: return "PINT_LITE";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "DLINT") return Scheme::Dlint;
    if (name == "PLINT") return Scheme::Plint;
    if (name == "P4INT") return Scheme::P4Int;
    if (name == "PINT_LITE") return Scheme::PintLite;
    throw Error("unknown scheme: " + name);
}

std::array<std::uint8_t, 13> FlowKey::serialize() const {
    std::array<std::uint8_t, 13> out{};
    out[0] = static_cast<std::uint8_t>(src_addr >> 24);
    out[1] = static_cast<std::uint8_t>(src_addr >> 16);
    out[2] = static_cast<std::uint8_t>(src_addr >> 8);
    out[3] = static_cast<std::uint8_t>(src_addr);
    out[4] = static_cast<std::uint8_t>(dst_addr >> 24);
    out[5] = static_cast<std::uint8_t>(dst_addr >> 16);
    out[6] = static_cast<std::uint8_t>(dst_addr >> 8);
    out[7] = static_cast<std::uint8_t>(dst_addr);
    out[8] = static_cast<std::uint8_t>(src_port >> 8);
    out[9] = static_cast<std::uint8_t>(src_port);
    out[10] = static_cast<std::uint8_t>(dst_port >> 8);
    out[11] = static_cast<std::uint8_t>(dst_port);
    out[12] = proto;
    return out;
}

std::size_t FlowKeyHash::operator()(const FlowKey& k) const {
    auto bytes = k.serialize();
    return static_cast<std::size_t>(murmur64a(bytes.data(), bytes.size(), 0));
}

SlotValue SlotValue::switch_id(SwitchId id) {
    if (id < 1 || id > kMaxSwitchId)
        throw InvariantViolation("switch id out of range: " + std::to_string(id));
    return {id};
}

Scheme scheme_of(const TelemetryHeader& h) {
    if (std::holds_alternative<DlintHeader>(h)) return Scheme::Dlint;
    if (std::holds_alternative<PlintHeader>(h)) return Scheme::Plint;
    if (std::holds_alternative<P4IntHeader>(h)) return Scheme::P4Int;
    return Scheme::PintLite;
}

Bytes encode_header(const TelemetryHeader& h) {
    Bytes out;
    if (const auto* d = std::get_if<DlintHeader>(&h)) {
        if (d->slots.empty())
            throw InvariantViolation("DLINT header needs at least one slot");
        for (const SlotValue& s : d->slots) {
            if (!s.is_valid())
                throw InvariantViolation("DLINT slot holds reserved value " +
                                         std::to_string(s.raw));
            put_u32(out, s.raw);
        }
    } else if (const auto* p = std::get_if<PlintHeader>(&h)) {
        if (p->slots.empty())
            throw InvariantViolation("PLINT header needs at least one slot");
        put_u8(out, p->init_ttl);
        for (const PlintSlot& s : p->slots) {
            if (!SlotValue{s.sw_id}.is_switch_id())
                throw InvariantViolation(
                    "PLINT slot requires a switch id, got " +
                    std::to_string(s.sw_id));
            if (s.hop_num < 1)
                throw InvariantViolation("PLINT hop_num must be >= 1");
            put_u32(out, s.sw_id);
            put_u8(out, s.hop_num);
        }
    } else if (const auto* q = std::get_if<P4IntHeader>(&h)) {
        if (q->value_count < 1)
            throw InvariantViolation("P4-INT value_count must be >= 1");
        if (q->stack.size() !=
            static_cast<std::size_t>(q->value_count) * q->hop_count)
            throw InvariantViolation("P4-INT stack length != v * hops");
        put_u8(out, q->version);
        put_u8(out, q->value_count);
        put_u16(out, q->hop_count);
        put_u32(out, q->instruction_bitmap);
        for (int i = 0; i < 8; ++i) put_u8(out, 0);  // shim padding
        for (std::uint32_t word : q->stack) put_u32(out, word);
    } else {
        const auto& l = std::get<PintLiteHeader>(h);
        if (!SlotValue{l.sw_id}.is_switch_id())
            throw InvariantViolation("PINT-lite header requires a switch id");
        put_u32(out, l.sw_id);
    }
    return out;
}

TelemetryHeader decode_header(const Bytes& bytes, Scheme scheme,
                              std::uint32_t v) {
    if (v < 1) throw InvariantViolation("v must be >= 1");
    switch (scheme) {
        case Scheme::Dlint: {
            if (bytes.size() != std::size_t{4} * v)
                throw TruncatedHeader("DLINT header length " +
                                      std::to_string(bytes.size()) +
                                      " != 4*v");
            DlintHeader d;
            d.slots.reserve(v);
            for (std::uint32_t i = 0; i < v; ++i) {
                SlotValue s{get_u32(bytes, std::size_t{4} * i)};
                if (!s.is_valid())
                    throw MalformedSlot("DLINT slot " + std::to_string(i) +
                                        " holds reserved value");
                d.slots.push_back(s);
            }
            return d;
        }
        case Scheme::Plint: {
            if (bytes.size() != std::size_t{1} + std::size_t{5} * v)
                throw TruncatedHeader("PLINT header length " +
                                      std::to_string(bytes.size()) +
                                      " != 1+5*v");
            PlintHeader p;
            p.init_ttl = bytes[0];
            p.slots.reserve(v);
            for (std::uint32_t i = 0; i < v; ++i) {
                std::size_t off = 1 + std::size_t{5} * i;
                PlintSlot s{get_u32(bytes, off), bytes[off + 4]};
                if (!SlotValue{s.sw_id}.is_switch_id())
                    throw MalformedSlot("PLINT slot " + std::to_string(i) +
                                        " carries a signal code");
                if (s.hop_num < 1)
                    throw MalformedSlot("PLINT slot " + std::to_string(i) +
                                        " has hop_num 0");
                p.slots.push_back(s);
            }
            return p;
        }
        case Scheme::P4Int: {
            if (bytes.size() < 16)
                throw TruncatedHeader("P4-INT header shorter than 16-byte shim");
            std::size_t stack_bytes = bytes.size() - 16;
            if (stack_bytes % (std::size_t{4} * v) != 0)
                throw TruncatedHeader("P4-INT stack length not a multiple of 4*v");
            P4IntHeader q;
            q.version = bytes[0];
            q.value_count = bytes[1];
            q.hop_count = get_u16(bytes, 2);
            q.instruction_bitmap = get_u32(bytes, 4);
            std::size_t hops = stack_bytes / (std::size_t{4} * v);
            if (q.value_count != v || q.hop_count != hops)
                throw MalformedSlot("P4-INT shim counters disagree with length");
            q.stack.reserve(stack_bytes / 4);
            for (std::size_t off = 16; off < bytes.size(); off += 4)
                q.stack.push_back(get_u32(bytes, off));
            return q;
        }
        case Scheme::PintLite: {
            if (bytes.size() != 4)
                throw TruncatedHeader("PINT-lite header must be 4 bytes");
            PintLiteHeader l{get_u32(bytes, 0)};
            if (!SlotValue{l.sw_id}.is_switch_id())
                throw MalformedSlot("PINT-lite header carries a signal code");
            return l;
        }
    }
    throw Error("unhandled scheme");
}

std::size_t overhead_bytes(Scheme scheme, std::uint32_t hops, std::uint32_t v) {
    if (hops < 1) throw InvariantViolation("hops must be >= 1");
    if (v < 1) throw InvariantViolation("v must be >= 1");
    switch (scheme) {
        case Scheme::Dlint: return std::size_t{4} * v;
        case Scheme::Plint: return std::size_t{1} + std::size_t{5} * v;
        case Scheme::P4Int: return std::size_t{16} + std::size_t{4} * v * hops;
        case Scheme::PintLite: return 4;
    }
    throw Error("unhandled scheme");
}

std::size_t header_wire_size(const TelemetryHeader& h) {
    if (const auto* d = std::get_if<DlintHeader>(&h))
        return std::size_t{4} * d->slots.size();
    if (const auto* p = std::get_if<PlintHeader>(&h))
        return std::size_t{1} + std::size_t{5} * p->slots.size();
    if (const auto* q = std::get_if<P4IntHeader>(&h))
        return std::size_t{16} + std::size_t{4} * q->stack.size();
    return 4;
}

std::string to_hex(const Bytes& b) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (std::uint8_t x : b) {
        out.push_back(digits[x >> 4]);
        out.push_back(digits[x & 0xf]);
    }
    return out;
}

Bytes from_hex(const std::string& hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw Error("invalid hex digit");
    };
    if (hex.size() % 2 != 0) throw Error("odd-length hex string");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2)
        out.push_back(static_cast<std::uint8_t>((nibble(hex[i]) << 4) |
                                                nibble(hex[i + 1])));
    return out;
}

}  // namespace lint::wire
