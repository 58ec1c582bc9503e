#include "lint/bloom_state.hpp"

#include "lint/hash.hpp"

namespace lint::bloom {

BloomStateStore::BloomStateStore(std::size_t cell_count, std::size_t hash_count,
                                 std::vector<std::uint64_t> seeds)
    : cell_count_(cell_count), seeds_(std::move(seeds)) {
    if (cell_count_ == 0) throw InvalidSize("Bloom store needs K >= 1 cells");
    if (hash_count == 0) throw InvalidSize("Bloom store needs m >= 1 hashes");
    if (seeds_.size() != hash_count)
        throw InvalidSize("seed list length must equal hash count");
    words_.assign((cell_count_ + 31) / 32, 0);  // all cells AwaitingInit
}

std::vector<std::size_t> BloomStateStore::indices(
    const wire::FlowKey& key) const {
    auto bytes = key.serialize();
    std::vector<std::size_t> out;
    out.reserve(seeds_.size());
    for (std::uint64_t seed : seeds_)
        out.push_back(static_cast<std::size_t>(
            murmur64a(bytes.data(), bytes.size(), seed) % cell_count_));
    return out;
}

TelemetryState BloomStateStore::lookup(const wire::FlowKey& key) const {
    auto bytes = key.serialize();
    std::uint8_t min_code = 3;
    for (std::uint64_t seed : seeds_) {
        auto idx = static_cast<std::size_t>(
            murmur64a(bytes.data(), bytes.size(), seed) % cell_count_);
        auto code = static_cast<std::uint8_t>(cell(idx));
        if (code < min_code) min_code = code;
    }
    return static_cast<TelemetryState>(min_code);
}

void BloomStateStore::update(const wire::FlowKey& key, TelemetryState s) {
    auto bytes = key.serialize();
    for (std::uint64_t seed : seeds_) {
        auto idx = static_cast<std::size_t>(
            murmur64a(bytes.data(), bytes.size(), seed) % cell_count_);
        set_cell(idx, s);
    }
}

TelemetryState BloomStateStore::cell(std::size_t index) const {
    auto shift = (index & 31) * 2;
    return static_cast<TelemetryState>((words_[index >> 5] >> shift) & 0x3);
}

void BloomStateStore::set_cell(std::size_t index, TelemetryState s) {
    auto shift = (index & 31) * 2;
    std::uint64_t& word = words_[index >> 5];
    word = (word & ~(std::uint64_t{0x3} << shift)) |
           (static_cast<std::uint64_t>(s) << shift);
}

}  // namespace lint::bloom
