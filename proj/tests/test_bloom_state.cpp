#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <set>
#include <vector>

#include "lint/bloom_state.hpp"
#include "lint/hash.hpp"
#include "lint/metrics.hpp"
#include "lint/rng.hpp"

using namespace lint;
using bloom::BloomStateStore;
using bloom::TelemetryState;
using wire::FlowKey;

namespace {

// Independent re-implementation of MurmurHash64A, written directly from the
// published algorithm, to cross-check the library's copy.
std::uint64_t reference_murmur64a(const std::uint8_t* data, std::size_t len,
                                  std::uint64_t seed) {
    const std::uint64_t m = 0xc6a4a7935bd1e995ULL;
    std::uint64_t h = seed ^ (len * m);
    std::size_t nblocks = len / 8;
    for (std::size_t b = 0; b < nblocks; ++b) {
        std::uint64_t k = 0;
        std::memcpy(&k, data + b * 8, 8);  // little-endian host assumed
        k *= m;
        k ^= k >> 47;
        k *= m;
        h ^= k;
        h *= m;
    }
    const std::uint8_t* tail = data + nblocks * 8;
    std::uint64_t t = 0;
    for (std::size_t i = len & 7; i > 0; --i) t = (t << 8) | tail[i - 1];
    if (len & 7) {
        h ^= t;
        h *= m;
    }
    h ^= h >> 47;
    h *= m;
    h ^= h >> 47;
    return h;
}

FlowKey key_with_ports(std::uint16_t sp, std::uint16_t dp) {
    return FlowKey{0x0A000001, 0x0A000002, sp, dp, 6};
}

// Brute-force search over ports for two keys sharing a cell.
std::pair<FlowKey, FlowKey> colliding_pair(const BloomStateStore& store) {
    FlowKey first = key_with_ports(1, 1);
    auto target = store.indices(first);
    for (std::uint16_t p = 2; p < 60000; ++p) {
        FlowKey cand = key_with_ports(p, 1);
        if (store.indices(cand) == target) return {first, cand};
    }
    throw std::runtime_error("no colliding key found");
}

}  // namespace

TEST_CASE("library hash matches an independent reference implementation") {
    Xoshiro256 rng(42);
    for (int i = 0; i < 500; ++i) {
        std::uint8_t buf[13];
        for (auto& x : buf) x = static_cast<std::uint8_t>(rng.next());
        std::uint64_t seed = rng.next();
        CHECK(murmur64a(buf, sizeof buf, seed) ==
              reference_murmur64a(buf, sizeof buf, seed));
    }
}

TEST_CASE("hash golden vectors pin the index mapping across ports") {
    struct Golden {
        FlowKey key;
        std::uint64_t seed0;
        std::uint64_t seed1;
    };
    const Golden golden[] = {
        {{0x0A000001, 0x0A000002, 1024, 80, 6}, 0xfa13f252359df73bULL,
         0x84ce03edf7d5b141ULL},
        {{0xC0A80101, 0xC0A80202, 5555, 443, 17}, 0xc4865977b0c6cb96ULL,
         0xe986a02bfc9a0ab5ULL},
        {{1, 2, 3, 4, 5}, 0xa3fe7e772c66327eULL, 0x2a71bf340c7bfcabULL},
    };
    for (const Golden& g : golden) {
        auto bytes = g.key.serialize();
        CHECK(murmur64a(bytes.data(), bytes.size(), 0) == g.seed0);
        CHECK(murmur64a(bytes.data(), bytes.size(), 0x9747b28c) == g.seed1);
        CHECK(reference_murmur64a(bytes.data(), bytes.size(), 0) == g.seed0);
    }
}

TEST_CASE("a fresh store reads AwaitingInit everywhere") {
    BloomStateStore store(8, 1, {7});
    for (std::uint16_t p = 0; p < 64; ++p)
        CHECK(store.lookup(key_with_ports(p, p)) ==
              TelemetryState::AwaitingInit);
}

TEST_CASE("degenerate single-cell store makes every flow collide") {
    BloomStateStore store(1, 1, {3});
    CHECK(store.indices(key_with_ports(1, 2)) ==
          std::vector<std::size_t>{0});
    store.update(key_with_ports(1, 2), TelemetryState::InsertedId);
    CHECK(store.lookup(key_with_ports(9, 9)) == TelemetryState::InsertedId);
}

TEST_CASE("construction preconditions") {
    CHECK_THROWS_AS(BloomStateStore(0, 1, {1}), InvalidSize);
    CHECK_THROWS_AS(BloomStateStore(8, 0, {}), InvalidSize);
    CHECK_THROWS_AS(BloomStateStore(8, 2, {1}), InvalidSize);
}

TEST_CASE("indices are deterministic and equal hash mod K") {
    BloomStateStore store(2, 1, {0x1234});
    FlowKey a = key_with_ports(10, 20);
    FlowKey b = key_with_ports(30, 40);
    CHECK(store.indices(a) == store.indices(a));
    for (const FlowKey& k : {a, b}) {
        auto bytes = k.serialize();
        std::size_t expected = static_cast<std::size_t>(
            reference_murmur64a(bytes.data(), bytes.size(), 0x1234) % 2);
        CHECK(store.indices(k) == std::vector<std::size_t>{expected});
    }
}

TEST_CASE("update and lookup round-trip through the cell array") {
    BloomStateStore store(64, 1, {11});
    FlowKey k = key_with_ports(5, 6);
    store.update(k, TelemetryState::ReadyToInsert);
    CHECK(store.lookup(k) == TelemetryState::ReadyToInsert);
    store.update(k, TelemetryState::InsertedId);
    CHECK(store.lookup(k) == TelemetryState::InsertedId);
    store.update(k, TelemetryState::InsertedId);  // idempotent
    CHECK(store.lookup(k) == TelemetryState::InsertedId);
    store.update(k, TelemetryState::AwaitingInit);
    CHECK(store.lookup(k) == TelemetryState::AwaitingInit);
}

TEST_CASE("colliding flows overwrite each other's state") {
    BloomStateStore store(4, 1, {99});
    auto [a, b] = colliding_pair(store);
    store.update(a, TelemetryState::ReadyToInsert);
    CHECK(store.lookup(b) == TelemetryState::ReadyToInsert);
    store.update(b, TelemetryState::InsertedId);
    CHECK(store.lookup(a) == TelemetryState::InsertedId);
}

TEST_CASE("non-colliding flows evolve independently") {
    BloomStateStore store(1 << 16, 1, {123});
    FlowKey a = key_with_ports(100, 1);
    FlowKey b = key_with_ports(200, 2);
    REQUIRE(store.indices(a) != store.indices(b));

    store.update(a, TelemetryState::ReadyToInsert);
    CHECK(store.lookup(b) == TelemetryState::AwaitingInit);
    store.update(b, TelemetryState::InsertedId);
    CHECK(store.lookup(a) == TelemetryState::ReadyToInsert);
    store.update(a, TelemetryState::InsertedId);
    store.update(b, TelemetryState::AwaitingInit);
    CHECK(store.lookup(a) == TelemetryState::InsertedId);
    CHECK(store.lookup(b) == TelemetryState::AwaitingInit);
}

TEST_CASE("state codes never read 3") {
    BloomStateStore store(32, 1, {5});
    Xoshiro256 rng(7);
    const TelemetryState states[] = {TelemetryState::AwaitingInit,
                                     TelemetryState::ReadyToInsert,
                                     TelemetryState::InsertedId};
    for (int i = 0; i < 5000; ++i) {
        FlowKey k = key_with_ports(static_cast<std::uint16_t>(rng.next()),
                                   static_cast<std::uint16_t>(rng.next()));
        store.update(k, states[rng.uniform_below(3)]);
        CHECK(static_cast<int>(store.lookup(k)) <= 2);
    }
    for (std::size_t c = 0; c < 32; ++c)
        CHECK(static_cast<int>(store.cell(c)) <= 2);
}

TEST_CASE("multi-hash lookup returns the minimum state code") {
    BloomStateStore store(128, 2, {1, 2});
    FlowKey k = key_with_ports(77, 88);
    auto idx = store.indices(k);
    REQUIRE(idx.size() == 2);
    REQUIRE(idx[0] != idx[1]);
    store.update(k, TelemetryState::InsertedId);
    CHECK(store.lookup(k) == TelemetryState::InsertedId);
    // A collision degrades one cell; the conservative minimum wins.
    store.set_cell(idx[0], TelemetryState::ReadyToInsert);
    CHECK(store.lookup(k) == TelemetryState::ReadyToInsert);
    store.set_cell(idx[1], TelemetryState::AwaitingInit);
    CHECK(store.lookup(k) == TelemetryState::AwaitingInit);
}

TEST_CASE("single-probe collision rate tracks the analytic false-positive rate") {
    struct Case {
        std::size_t cells;
        std::size_t entries;
        std::size_t hashes;
    };
    for (const Case& c : {Case{1024, 128, 1}, Case{1024, 512, 1},
                          Case{1024, 256, 4}}) {
        Xoshiro256 rng(0xabcdef ^ c.entries);
        std::uint64_t hits = 0;
        std::uint64_t probes = 0;
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<std::uint64_t> seeds;
            for (std::size_t j = 0; j < c.hashes; ++j)
                seeds.push_back(rng.next());
            BloomStateStore store(c.cells, c.hashes, seeds);
            std::set<std::pair<std::uint32_t, std::uint32_t>> inserted;
            while (inserted.size() < c.entries) {
                FlowKey k{static_cast<std::uint32_t>(rng.next()),
                          static_cast<std::uint32_t>(rng.next()),
                          static_cast<std::uint16_t>(rng.next()),
                          static_cast<std::uint16_t>(rng.next()), 6};
                if (inserted.insert({k.src_addr, k.dst_addr}).second)
                    store.update(k, TelemetryState::ReadyToInsert);
            }
            for (int probe = 0; probe < 1000; ++probe) {
                FlowKey k{static_cast<std::uint32_t>(rng.next()),
                          static_cast<std::uint32_t>(rng.next()),
                          static_cast<std::uint16_t>(rng.next()),
                          static_cast<std::uint16_t>(rng.next()), 17};
                probes++;
                if (store.lookup(k) != TelemetryState::AwaitingInit) hits++;
            }
        }
        double empirical = static_cast<double>(hits) / probes;
        double analytic =
            metrics::bf_false_positive_rate(c.cells, c.entries, c.hashes);
        CHECK(std::abs(empirical - analytic) < 0.02);
    }
}
