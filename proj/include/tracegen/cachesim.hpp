#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tracegen/distributions.hpp"
#include "tracegen/trace.hpp"

namespace tracegen {

enum class Policy { Lru, Fifo, Clock, Lfu };

std::string_view to_string(Policy p) noexcept;
/// Case-insensitive; throws ValidationError on unknown names.
Policy parse_policy(std::string_view name);

/// Hit ratio as a function of cache size (in items) for one policy.
struct HitRatioCurve {
    struct Point {
        double cache_size = 0.0;
        double hit_ratio = 0.0;
        bool operator==(const Point&) const = default;
    };

    std::string policy;
    std::vector<Point> points;  // cache_size strictly increasing
    std::uint64_t footprint = 0;
    std::uint64_t length = 0;

    double normalized(const Point& p) const {
        return footprint == 0 ? 0.0 : p.cache_size / static_cast<double>(footprint);
    }
    /// Step lookup for integer-size curves: hit ratio at the largest sampled
    /// size <= c, 0 below the first point.
    double at(double cache_size) const;

    bool operator==(const HitRatioCurve&) const = default;
};

struct Footprint {
    std::uint64_t distinct = 0;
    std::uint64_t length = 0;
    bool operator==(const Footprint&) const = default;
};

Footprint measure_footprint(std::span<const std::uint64_t> refs);
inline Footprint measure_footprint(const Trace& trace) { return measure_footprint(block_refs(trace)); }

/// Cold-start simulation; returns hits / N. CLOCK keeps one reference bit per
/// slot with the hand starting at slot 0; LFU counts in-cache frequency and
/// breaks ties by least-recent use.
double simulate(std::span<const std::uint64_t> refs, Policy policy, std::uint64_t cache_size);
inline double simulate(const Trace& trace, Policy policy, std::uint64_t cache_size) {
    return simulate(block_refs(trace), policy, cache_size);
}

/// Per-reference LRU stack distance counting the re-referenced item itself,
/// so a reference hits in an LRU cache of size C iff distance <= C.
/// First touches are kInfiniteIrd.
std::vector<std::uint64_t> stack_distances(std::span<const std::uint64_t> refs);

/// Full LRU curve from one stack-distance pass: a point for every size
/// 1..max finite distance, plus the footprint when larger.
HitRatioCurve exact_lru_hrc(std::span<const std::uint64_t> refs);
inline HitRatioCurve exact_lru_hrc(const Trace& trace) { return exact_lru_hrc(block_refs(trace)); }

/// `count` geometrically spaced integer sizes from 1 to `footprint`
/// (deduplicated, always including both ends).
std::vector<std::uint64_t> geometric_sizes(std::uint64_t footprint, std::size_t count = 64);

/// Curve over an explicit grid. LRU is read off the stack-distance curve;
/// other policies simulate each size, fanned out over `threads` workers
/// (0 = hardware concurrency).
HitRatioCurve simulate_hrc(std::span<const std::uint64_t> refs, Policy policy,
                           std::vector<std::uint64_t> sizes, unsigned threads = 0);

}  // namespace tracegen
