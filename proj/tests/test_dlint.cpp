#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "lint/dlint_switch.hpp"

using namespace lint;
using bloom::TelemetryState;
using dlint::DlintOptions;
using dlint::DlintSwitch;
using wire::DlintHeader;
using wire::Packet;
using wire::SlotValue;

namespace {

std::vector<wire::SwitchId> ids_of(const SinkReport& r) {
    std::vector<wire::SwitchId> out;
    for (const ReportItem& it : r.items) out.push_back(it.sw_id);
    return out;
}

// Drives packets hop by hop through a chain of switches (ids 1..n) without
// the event engine. Checks the one-ID-per-switch-per-packet bound on every
// traversal.
struct Chain {
    std::vector<DlintSwitch> sw;
    wire::FlowKey flow{0x0A000001, 0x0A000002, 1111, 2222, 6};
    std::uint64_t fwd_seq = 0;
    std::uint64_t rev_seq = 0;

    Chain(int n, std::uint32_t v, DlintOptions opts = {},
          std::size_t cells = std::size_t{1} << 16) {
        for (int i = 1; i <= n; ++i)
            sw.emplace_back(static_cast<wire::SwitchId>(i), v, cells, 1,
                            std::vector<std::uint64_t>{0xABCD}, opts);
    }

    static Role role_at(std::size_t i, std::size_t n) {
        return i == 0 ? Role::Source : i + 1 == n ? Role::Sink : Role::Transit;
    }

    static std::size_t id_slots(const Packet& pkt) {
        if (!pkt.header) return 0;
        std::size_t count = 0;
        for (const SlotValue& s : std::get<DlintHeader>(*pkt.header).slots)
            if (s.is_switch_id()) ++count;
        return count;
    }

    SinkReport forward() {
        Packet pkt;
        pkt.flow = flow;
        pkt.ttl = wire::kInitialTtl;
        pkt.seq = ++fwd_seq;
        SinkReport out;
        for (std::size_t i = 0; i < sw.size(); ++i) {
            std::size_t before = id_slots(pkt);
            ForwardAction act =
                sw[i].process_forward(pkt, role_at(i, sw.size()));
            if (!act.attached_header && !act.stripped_header)
                CHECK(id_slots(pkt) - before <= 1);
            if (act.report) out = *act.report;
            pkt.ttl--;
        }
        return out;
    }

    // Reverse packet across the given chain indices (default: full chain
    // reversed).
    std::optional<SinkReport> reverse(std::vector<std::size_t> order = {}) {
        if (order.empty())
            for (std::size_t i = sw.size(); i-- > 0;) order.push_back(i);
        Packet pkt;
        pkt.flow = flow;
        pkt.direction = wire::Direction::Reverse;
        pkt.ttl = wire::kInitialTtl;
        pkt.seq = ++rev_seq;
        std::optional<SinkReport> out;
        for (std::size_t j = 0; j < order.size(); ++j) {
            Role r = role_at(j, order.size());
            ForwardAction act = sw[order[j]].process_reverse(pkt, r);
            if (act.report) out = act.report;
            pkt.ttl--;
        }
        return out;
    }

    TelemetryState state_of(std::size_t i) const {
        return sw[i].store().lookup(flow);
    }
};

}  // namespace

TEST_CASE("single-value five-switch cycle follows the canonical schedule") {
    Chain c(5, 1);

    SinkReport r1 = c.forward();
    CHECK(r1.signals == std::vector<std::uint32_t>{SlotValue::kInit});
    CHECK(r1.items.empty());
    CHECK_FALSE(r1.cycle_complete);
    CHECK(r1.path_len == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(c.state_of(i) == TelemetryState::ReadyToInsert);

    for (wire::SwitchId id = 1; id <= 4; ++id) {
        SinkReport r = c.forward();
        CHECK(ids_of(r) == std::vector<wire::SwitchId>{id});
        CHECK(r.signals.empty());
        CHECK_FALSE(r.cycle_complete);
    }

    SinkReport r6 = c.forward();
    CHECK(ids_of(r6) == std::vector<wire::SwitchId>{5});
    CHECK(r6.cycle_complete);
    CHECK(r6.bare);  // sink reported directly, no header on the wire
    CHECK(c.sw[4].reset_armed(c.flow));

    // Nothing inserts again until RESET comes back.
    SinkReport r7 = c.forward();
    CHECK(r7.items.empty());
    CHECK(r7.signals.empty());

    c.reverse();
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(c.state_of(i) == TelemetryState::AwaitingInit);
    CHECK_FALSE(c.sw[4].reset_armed(c.flow));

    SinkReport r8 = c.forward();  // the cycle restarts
    CHECK(r8.signals == std::vector<std::uint32_t>{SlotValue::kInit});
}

TEST_CASE("three-value header traces five switches in two packets") {
    Chain c(5, 3);

    SinkReport r1 = c.forward();
    CHECK(r1.signals == std::vector<std::uint32_t>{SlotValue::kInit});
    CHECK(ids_of(r1) == std::vector<wire::SwitchId>{1, 2});
    CHECK_FALSE(r1.cycle_complete);

    SinkReport r2 = c.forward();
    CHECK(ids_of(r2) == std::vector<wire::SwitchId>{3, 4, 5});
    CHECK(r2.cycle_complete);
    CHECK_FALSE(r2.bare);  // the sink found a free slot in the header

    c.reverse();
    SinkReport r3 = c.forward();
    CHECK(ids_of(r3) == std::vector<wire::SwitchId>{1, 2});
    SinkReport r4 = c.forward();
    CHECK(ids_of(r4) == std::vector<wire::SwitchId>{3, 4, 5});
    CHECK(r4.cycle_complete);
}

TEST_CASE("cycle length is ceil((n+1)/v) forward packets") {
    for (int n : {2, 5, 10}) {
        for (std::uint32_t v : {1u, 2u, 3u, 5u}) {
            Chain c(n, v);
            std::uint32_t expected = (n + 1 + v - 1) / v;
            for (int cycle = 0; cycle < 3; ++cycle) {
                std::uint32_t packets = 0;
                while (true) {
                    SinkReport r = c.forward();
                    packets++;
                    if (r.cycle_complete) break;
                    REQUIRE(packets < 100);
                }
                CHECK(packets == expected);
                c.reverse();
            }
        }
    }
}

TEST_CASE("transit in AwaitingInit treats a headered packet without INIT as lost-INIT") {
    DlintSwitch sw(7, 1, 64, 1, {1});
    Packet pkt;
    pkt.flow = {1, 2, 3, 4, 5};
    pkt.ttl = 60;
    pkt.header = DlintHeader{{SlotValue::switch_id(1)}};

    ForwardAction act = sw.process_forward(pkt, Role::Transit);
    CHECK_FALSE(act.wrote_slot);
    CHECK(sw.store().lookup(pkt.flow) == TelemetryState::ReadyToInsert);
    CHECK(std::get<DlintHeader>(*pkt.header).slots[0] ==
          SlotValue::switch_id(1));  // packet unmodified
}

TEST_CASE("INIT while ReadyToInsert still inserts when a slot is free") {
    DlintSwitch sw(9, 2, 64, 1, {1});
    wire::FlowKey flow{1, 2, 3, 4, 5};

    Packet lost;
    lost.flow = flow;
    lost.ttl = 60;
    lost.header = DlintHeader{{SlotValue::switch_id(3), SlotValue::empty()}};
    sw.process_forward(lost, Role::Transit);
    // lost-INIT recovery arms the switch but never inserts
    CHECK(sw.store().lookup(flow) == TelemetryState::ReadyToInsert);

    Packet init_pkt;
    init_pkt.flow = flow;
    init_pkt.ttl = 60;
    init_pkt.header = DlintHeader{{SlotValue::init(), SlotValue::empty()}};
    ForwardAction act = sw.process_forward(init_pkt, Role::Transit);
    CHECK(act.wrote_slot);
    CHECK(std::get<DlintHeader>(*init_pkt.header).slots[1] ==
          SlotValue::switch_id(9));
    CHECK(sw.store().lookup(flow) == TelemetryState::InsertedId);
}

TEST_CASE("source rejects an already-encapsulated forward packet") {
    DlintSwitch sw(1, 1, 64, 1, {1});
    Packet pkt;
    pkt.flow = {1, 2, 3, 4, 5};
    pkt.header = DlintHeader{{SlotValue::init()}};
    CHECK_THROWS_AS(sw.process_forward(pkt, Role::Source),
                    UnexpectedHeaderAtSource);
}

TEST_CASE("reverse packet with nothing armed passes through untouched") {
    Chain c(3, 1);
    c.forward();  // INIT out, nothing armed yet
    Packet pkt;
    pkt.flow = c.flow;
    pkt.direction = wire::Direction::Reverse;
    pkt.ttl = wire::kInitialTtl;
    const std::size_t order[] = {2, 1, 0};  // sink side first
    for (std::size_t j = 0; j < 3; ++j) {
        ForwardAction act =
            c.sw[order[j]].process_reverse(pkt, Chain::role_at(j, 3));
        CHECK_FALSE(act.attached_header);
        CHECK_FALSE(act.wrote_slot);
        CHECK_FALSE(pkt.header.has_value());
        pkt.ttl--;
    }
}

TEST_CASE("asymmetric reverse path that reaches only the source restarts the cycle") {
    Chain c(5, 1);
    for (int i = 0; i < 6; ++i) c.forward();  // complete one cycle
    CHECK(c.sw[4].reset_armed(c.flow));

    // ACKs skip the middle switches entirely: sink then source.
    c.reverse({4, 0});
    CHECK(c.state_of(0) == TelemetryState::AwaitingInit);
    CHECK(c.state_of(4) == TelemetryState::AwaitingInit);
    CHECK(c.state_of(1) == TelemetryState::InsertedId);
    CHECK(c.state_of(2) == TelemetryState::InsertedId);
    CHECK(c.state_of(3) == TelemetryState::InsertedId);

    // The source re-INITs: a new cycle begins even though transits were
    // never reset.
    SinkReport r = c.forward();
    CHECK(r.signals == std::vector<std::uint32_t>{SlotValue::kInit});
}

TEST_CASE("path-length annotation follows the TTL arithmetic") {
    for (int n : {2, 3, 8, 11}) {
        Chain c(n, 1);
        SinkReport r = c.forward();
        CHECK(r.path_len == static_cast<std::uint32_t>(n));
    }
}

TEST_CASE("watchdog un-wedges a flow whose RESET never arrives") {
    DlintOptions opts;
    opts.watchdog = true;
    opts.watchdog_threshold = 4;
    Chain c(3, 1, opts);

    // Cycle: INIT, s1, s2 (source bare), s3-direct (source bare). The source
    // has already forwarded 2 of its 4 headerless packets by completion.
    for (int i = 0; i < 4; ++i) c.forward();
    CHECK(c.state_of(0) == TelemetryState::InsertedId);

    for (int i = 0; i < 2; ++i) {
        SinkReport r = c.forward();
        CHECK(r.items.empty());
    }
    CHECK(c.state_of(0) == TelemetryState::AwaitingInit);
    SinkReport r = c.forward();
    CHECK(r.signals == std::vector<std::uint32_t>{SlotValue::kInit});
}

TEST_CASE("bidirectional tracing completes cycles both ways") {
    DlintOptions opts;
    opts.trace_reverse = true;
    Chain c(4, 1, opts);
    wire::FlowKey rkey = c.flow.reversed();

    std::vector<SinkReport> fwd, rev;
    for (int round = 0; round < 24; ++round) {
        SinkReport f = c.forward();
        fwd.push_back(f);
        if (auto r = c.reverse()) rev.push_back(*r);
    }

    // Forward tracing still completes despite interleaved RESETs.
    int fwd_complete = 0;
    for (const SinkReport& r : fwd)
        if (r.cycle_complete) fwd_complete++;
    CHECK(fwd_complete >= 2);

    // Reverse-direction reports belong to the reversed flow and assemble the
    // reverse path 4,3,2,1 across packets.
    REQUIRE(!rev.empty());
    std::vector<wire::SwitchId> seen;
    int rev_complete = 0;
    for (const SinkReport& r : rev) {
        CHECK(r.flow == rkey);
        for (const ReportItem& it : r.items) seen.push_back(it.sw_id);
        if (r.cycle_complete) rev_complete++;
    }
    CHECK(rev_complete >= 1);
    bool found = false;
    for (std::size_t i = 0; i + 3 < seen.size(); ++i)
        if (seen[i] == 4 && seen[i + 1] == 3 && seen[i + 2] == 2 &&
            seen[i + 3] == 1)
            found = true;
    CHECK(found);
}
