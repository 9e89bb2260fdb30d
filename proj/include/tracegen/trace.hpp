#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tracegen {

enum class Op : std::uint8_t { Read, Write };

/// A reference stream. The decoration arrays are either empty or parallel to
/// `refs`; `sizes` counts blocks starting at the referenced address.
struct Trace {
    std::vector<std::uint64_t> refs;
    std::vector<Op> ops;
    std::vector<std::uint32_t> sizes;
    std::vector<double> timestamps;

    std::size_t size() const noexcept { return refs.size(); }
    bool empty() const noexcept { return refs.empty(); }
    bool has_multiblock() const noexcept {
        for (auto s : sizes)
            if (s != 1) return true;
        return false;
    }

    bool operator==(const Trace&) const = default;
};

/// Block-granularity view: a request of s blocks at address a becomes the
/// references a, a + 1, ..., a + s - 1.
std::vector<std::uint64_t> block_refs(const Trace& trace);

}  // namespace tracegen
