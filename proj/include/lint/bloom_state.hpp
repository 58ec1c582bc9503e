#pragma once

#include <cstdint>
#include <vector>

#include "lint/errors.hpp"
#include "lint/wire.hpp"

namespace lint::bloom {

// 2-bit per-flow telemetry state coordinating slot insertion.
enum class TelemetryState : std::uint8_t {
    AwaitingInit = 0,
    ReadyToInsert = 1,
    InsertedId = 2,
};

// Bloom-filter-backed state table: K 2-bit cells indexed by m seeded hashes
// of the serialized 5-tuple. Cells are packed 32 per 64-bit word, mirroring
// the register-budget constraint the structure exists to serve.
//
// Distinct flows may collide on cells; the store makes no attempt to resolve
// that. With m > 1 the cells of one flow can disagree after collisions, and
// lookup returns the minimum state code (prefer re-initialization over
// skipping insertion). The default is m = 1.
class BloomStateStore {
public:
    BloomStateStore(std::size_t cell_count, std::size_t hash_count,
                    std::vector<std::uint64_t> seeds);

    std::size_t cell_count() const { return cell_count_; }
    std::size_t hash_count() const { return seeds_.size(); }

    std::vector<std::size_t> indices(const wire::FlowKey& key) const;

    TelemetryState lookup(const wire::FlowKey& key) const;
    void update(const wire::FlowKey& key, TelemetryState s);

    // Raw cell access for tests and diagnostics.
    TelemetryState cell(std::size_t index) const;
    void set_cell(std::size_t index, TelemetryState s);

private:
    std::size_t cell_count_;
    std::vector<std::uint64_t> seeds_;
    std::vector<std::uint64_t> words_;
};

}  // namespace lint::bloom
