#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tracegen/cachesim.hpp"
#include "tracegen/distributions.hpp"
#include "tracegen/trace.hpp"

namespace tracegen {

// ---------------------------------------------------------------------------
// IRD measurement
// ---------------------------------------------------------------------------

/// Binned inter-reference distances. Bin j counts IRDs in
/// [edges[j] + 1, edges[j + 1]]; finite IRDs past the last edge land in
/// `overflow`; first touches are counted at IRD = infinity.
struct IrdHistogram {
    std::vector<std::uint64_t> edges{0};
    std::vector<std::uint64_t> counts;
    std::uint64_t overflow = 0;
    std::uint64_t inf_count = 0;
    std::uint64_t total = 0;
    std::uint64_t max_finite = 0;  // largest finite IRD seen, 0 if none

    std::uint64_t finite_count() const noexcept { return total - inf_count; }
    bool operator==(const IrdHistogram&) const = default;
};

/// IRD of every reference: j - i for the previous reference i to the same
/// item, kInfiniteIrd for first touches.
std::vector<std::uint64_t> inter_reference_distances(std::span<const std::uint64_t> refs);

/// Unit bins for IRDs 1..1024, then `log_bins` geometrically growing bins
/// up to `max_ird`.
std::vector<std::uint64_t> log_edges(std::uint64_t max_ird, std::size_t log_bins = 64);

IrdHistogram histogram_from_irds(std::span<const std::uint64_t> irds, std::vector<std::uint64_t> edges);

/// Default binning: exact below 1024, `log_bins` log-spaced bins above.
IrdHistogram measure_ird(std::span<const std::uint64_t> refs, std::size_t log_bins = 64);
IrdHistogram measure_ird(std::span<const std::uint64_t> refs, std::vector<std::uint64_t> edges);

/// Total variation distance between the finite part of a measured histogram
/// and the finite part of `spec`, both normalized to 1. The histogram must
/// be binned on the spec's edges; overflow counts as unmatched mass.
double total_variation(const IrdHistogram& measured, const IrdSpec& spec);

// ---------------------------------------------------------------------------
// Che / AET approximation
// ---------------------------------------------------------------------------

/// IRD distribution treated as piecewise uniform within bins, with a
/// permanent mass at infinity. With P(t) = Pr(IRD >= t):
///     C(tau)   = sum_{t=1..tau} P(t)          (cache size reached at eviction time tau)
///     hit(tau) = Pr(IRD <= tau) = 1 - P(tau + 1)
/// A deterministic IRD d therefore predicts a step from 0 to 1 at C = d,
/// which is where an LRU cache starts hitting on a cyclic scan of d items.
class AetModel {
public:
    explicit AetModel(const IrdHistogram& hist);
    /// Idealized model of a spec with a sample space.
    static AetModel from_spec(const IrdSpec& spec);

    double cache_size(std::uint64_t tau) const;
    double hit_ratio(std::uint64_t tau) const;
    double p_infinite() const noexcept { return p_inf_; }
    /// Largest finite IRD with mass (upper edge of the last non-empty bin).
    std::uint64_t max_tau() const noexcept { return max_tau_; }

    /// Smallest tau with C(tau) >= c. Where C is flat the inverse is an
    /// interval; this returns its left endpoint.
    std::uint64_t eviction_time(double cache_size) const;

private:
    AetModel() = default;
    struct Bin {
        std::uint64_t lo;  // exclusive
        std::uint64_t hi;  // inclusive
        double mass;
    };
    void finish();

    std::vector<Bin> bins_;
    std::vector<double> mass_prefix_;  // mass of bins [0, j)
    std::vector<double> mean_prefix_;  // sum of mass * mean over bins [0, j)
    double p_inf_ = 0.0;
    std::uint64_t max_tau_ = 0;
};

struct AetCurve {
    struct Point {
        std::uint64_t tau = 0;
        double cache_size = 0.0;
        double hit_ratio = 0.0;
    };
    std::vector<Point> points;
    std::uint64_t footprint = 0;

    /// Predicted HRC; where several tau share a cache size the highest hit
    /// ratio is kept.
    HitRatioCurve to_hrc() const;
};

/// Sweeps tau over 1..max finite IRD (every integer up to 4096, then a
/// geometric grid that includes every bin edge). The curve's footprint is
/// the histogram's first-touch count.
AetCurve che_predict(const IrdHistogram& hist);

struct CacheInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Predicted cliff for a spike bin: [C(lo edge), C(hi edge)].
CacheInterval spike_to_cliff(const IrdSpec& spec, std::size_t spike_bin);

// ---------------------------------------------------------------------------
// Curve metrics
// ---------------------------------------------------------------------------

/// Hit ratio at normalized size x (size / footprint), linear between points,
/// clamped outside them.
double interpolate_normalized(const HitRatioCurve& curve, double x);

/// 100 evenly spaced normalized sizes in (0, 1].
std::vector<double> default_mae_grid();

double hrc_mae(const HitRatioCurve& a, const HitRatioCurve& b, std::span<const double> grid);
inline double hrc_mae(const HitRatioCurve& a, const HitRatioCurve& b) {
    return hrc_mae(a, b, default_mae_grid());
}

/// Largest vertical gap between the curve (normalized sizes, with the origin
/// prepended) and its least concave majorant. 0 for concave curves.
double concavity_gap(const HitRatioCurve& curve);

}  // namespace tracegen
