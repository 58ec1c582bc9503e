#pragma once

#include <cstddef>
#include <cstdint>

namespace lint {

// MurmurHash64A (Austin Appleby, public domain). Pinned as the flow-key hash
// so Bloom index golden vectors stay stable across ports; tests keep an
// independent byte-at-a-time reimplementation to cross-check this one.
inline std::uint64_t murmur64a(const void* key, std::size_t len,
                               std::uint64_t seed) {
    const std::uint64_t m = 0xc6a4a7935bd1e995ULL;
    const int r = 47;

    std::uint64_t h = seed ^ (static_cast<std::uint64_t>(len) * m);

    const auto* data = static_cast<const unsigned char*>(key);
    const unsigned char* end = data + (len & ~std::size_t{7});

    while (data != end) {
        std::uint64_t k = 0;
        // Assemble little-endian word byte-wise; avoids unaligned loads and
        // host-endianness dependence.
        for (int i = 0; i < 8; ++i) k |= static_cast<std::uint64_t>(data[i]) << (8 * i);
        data += 8;

        k *= m;
        k ^= k >> r;
        k *= m;

        h ^= k;
        h *= m;
    }

    switch (len & 7) {
        case 7: h ^= static_cast<std::uint64_t>(data[6]) << 48; [[fallthrough]];
        case 6: h ^= static_cast<std::uint64_t>(data[5]) << 40; [[fallthrough]];
        case 5: h ^= static_cast<std::uint64_t>(data[4]) << 32; [[fallthrough]];
        case 4: h ^= static_cast<std::uint64_t>(data[3]) << 24; [[fallthrough]];
        case 3: h ^= static_cast<std::uint64_t>(data[2]) << 16; [[fallthrough]];
        case 2: h ^= static_cast<std::uint64_t>(data[1]) << 8;  [[fallthrough]];
        case 1: h ^= static_cast<std::uint64_t>(data[0]);
                h *= m;
    }

    h ^= h >> r;
    h *= m;
    h ^= h >> r;

    return h;
}

}  // namespace lint
