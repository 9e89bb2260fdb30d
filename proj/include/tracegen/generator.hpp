#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tracegen/distributions.hpp"
#include "tracegen/rng.hpp"
#include "tracegen/trace.hpp"

namespace tracegen {

/// Independent (IRM) arrivals live at or above this id unless the profile
/// asks for overlapping address spaces.
inline constexpr std::uint64_t kIrmAddressBase = std::uint64_t{1} << 48;

inline constexpr std::uint64_t kDefaultSeed = 20251016;

/// Request sizes in blocks, drawn with probability proportional to weights.
struct SizeDistribution {
    std::vector<double> weights;
    std::vector<std::uint32_t> values;
    bool operator==(const SizeDistribution&) const = default;
};

/// The triplet <p_irm, g, f> plus scale, seed and optional decoration.
/// `f` is kept scale-free (fgen/stepwise) or absolute (empirical); it is
/// auto-tuned for `m` at generation time. `g` is instantiated over
/// `universe` items, defaulting to `m`.
struct TraceProfile {
    double p_irm = 0.0;
    std::optional<IrmFamily> g;
    std::optional<IrdSpec> f;
    std::uint64_t m = 1;
    std::uint64_t n = 1;
    std::uint64_t seed = kDefaultSeed;
    std::optional<std::uint64_t> universe;
    bool overlap = false;  // IRM ids share the dependent address space
    std::optional<double> read_fraction;
    std::optional<SizeDistribution> sizes;

    /// Throws ProfileError when the triplet is inconsistent and
    /// ValidationError for out-of-range values.
    void validate() const;

    std::uint64_t irm_universe() const { return universe.value_or(m); }
    bool decorated() const { return read_fraction.has_value() || sizes.has_value(); }

    bool operator==(const TraceProfile&) const = default;
};

/// Min-heap of <wake_time, address>; ties pop in insertion order.
class SleeperHeap {
public:
    struct Entry {
        std::uint64_t wake = 0;
        std::uint64_t seq = 0;
        std::uint64_t addr = 0;
    };

    void reserve(std::size_t n) { entries_.reserve(n); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const Entry& top() const { return entries_.front(); }

    void push(std::uint64_t wake, std::uint64_t addr);
    /// Pops the minimum and re-inserts its address with a new wake time.
    void replace_top(std::uint64_t wake);

    const std::vector<Entry>& entries() const noexcept { return entries_; }

private:
    static bool before(const Entry& a, const Entry& b) noexcept {
        return a.wake != b.wake ? a.wake < b.wake : a.seq < b.seq;
    }
    std::vector<Entry> entries_;
    std::uint64_t next_seq_ = 0;
};

enum class Source : std::uint8_t { Independent, Dependent, Singleton };

/// The dependent-arrival (IRD renewal) process: M sleeping items, each
/// re-sleeping for a fresh IRD draw after it is referenced.
class DependentProcess {
public:
    /// Draws sleep times until `m` finite sleepers exist, addressed 0..m-1.
    DependentProcess(IrdSpec f, std::uint64_t m, Rng& rng);

    /// Pre-seeded heap: sleeper i gets address i and wake time wake_times[i];
    /// singletons start at wake_times.size().
    DependentProcess(IrdSpec f, const std::vector<std::uint64_t>& wake_times);

    /// Emits one reference.
    std::uint64_t next(Rng& rng, Source* source = nullptr);

    const SleeperHeap& heap() const noexcept { return heap_; }
    std::uint64_t singletons() const noexcept { return next_address_ - footprint_; }

private:
    IrdSpec f_;
    SleeperHeap heap_;
    std::uint64_t footprint_ = 0;
    std::uint64_t next_address_ = 0;
};

/// Gen-from-IRD. `f` must already carry a sample space (auto_tune_tmax).
Trace gen_from_ird(const IrdSpec& f, std::uint64_t m, std::uint64_t n, Rng& rng);

/// Gen-from-2D over the whole profile (ids only, no decoration).
Trace gen_from_2d(const TraceProfile& profile);

struct GenerationStats {
    std::uint64_t length = 0;
    std::uint64_t footprint = 0;          // distinct ids in the trace
    std::uint64_t dependent_items = 0;    // distinct ids among 0..m-1 emitted
    std::uint64_t singletons = 0;
    std::uint64_t independent_refs = 0;
    std::uint64_t independent_items = 0;  // distinct IRM ids emitted
};

struct Generated {
    Trace trace;
    std::vector<Source> sources;  // filled only when requested
    GenerationStats stats;
};

/// Gen-from-2D plus decoration (when the profile asks for it) and statistics.
Generated generate(const TraceProfile& profile, bool tag_sources = false);

/// Tags each reference R with probability read_fraction, else W, and draws a
/// block count from `sizes`. Reference ids are left untouched.
Trace decorate(Trace trace, double read_fraction, const SizeDistribution& sizes, Rng& rng);

}  // namespace tracegen
