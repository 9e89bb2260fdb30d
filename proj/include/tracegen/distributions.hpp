#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tracegen/rng.hpp"

namespace tracegen {

/// Sentinel for an infinite inter-reference distance (a one-hit wonder).
inline constexpr std::uint64_t kInfiniteIrd = std::numeric_limits<std::uint64_t>::max();

// ---------------------------------------------------------------------------
// IRD distributions
// ---------------------------------------------------------------------------

/// fgen(k, spikes, epsilon). Spike indices are 0-based bin indices.
struct FgenSource {
    std::size_t k = 0;
    std::vector<std::size_t> spikes;
    double epsilon = 0.0;
    bool operator==(const FgenSource&) const = default;
};

/// Arbitrary k-bin stepwise weights over the auto-tuned sample space.
struct StepwiseSource {
    std::vector<double> weights;
    double inf_weight = 0.0;
    bool operator==(const StepwiseSource&) const = default;
};

/// One row of a measured IRD histogram: `count` references with IRD in [lo, hi].
struct IrdRow {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    double count = 0.0;
    bool operator==(const IrdRow&) const = default;
};

/// Absolute-scale histogram of IRDs, optionally with a count at IRD = infinity.
struct EmpiricalIrdSource {
    std::vector<IrdRow> rows;
    double inf_count = 0.0;
    bool operator==(const EmpiricalIrdSource&) const = default;
};

using IrdSource = std::variant<FgenSource, StepwiseSource, EmpiricalIrdSource>;

/// A k-bin stepwise IRD distribution. Bin j (0-based) covers the integer IRDs
/// [edges[j] + 1, edges[j + 1]]; samples are uniform within a bin. Relative
/// specs (fgen, stepwise) have no edges until auto_tune_tmax() fixes t_max;
/// empirical specs carry their own absolute edges.
class IrdSpec {
public:
    std::size_t k() const noexcept { return bin_probs_.size(); }
    const std::vector<double>& bin_probs() const noexcept { return bin_probs_; }
    double p_infinite() const noexcept { return p_infinite_; }
    double finite_mass() const noexcept { return 1.0 - p_infinite_; }

    /// 0 until the sample space is fixed.
    std::uint64_t t_max() const noexcept { return edges_.empty() ? 0 : edges_.back(); }
    bool has_sample_space() const noexcept { return !edges_.empty(); }
    const std::vector<std::uint64_t>& edges() const noexcept { return edges_; }
    std::uint64_t bin_lo(std::size_t j) const { return edges_.at(j) + 1; }
    std::uint64_t bin_hi(std::size_t j) const { return edges_.at(j + 1); }

    const IrdSource& source() const noexcept { return source_; }
    bool is_empirical() const noexcept {
        return std::holds_alternative<EmpiricalIrdSource>(source_);
    }

    bool operator==(const IrdSpec& other) const {
        return source_ == other.source_ && bin_probs_ == other.bin_probs_ &&
               p_infinite_ == other.p_infinite_ && edges_ == other.edges_;
    }

    // Constructors are the free functions below.
    static IrdSpec from_parts(IrdSource source, std::vector<double> bin_probs,
                              double p_infinite, std::vector<std::uint64_t> edges);

private:
    friend std::uint64_t sample_ird(const IrdSpec&, Rng&);

    IrdSource source_;
    std::vector<double> bin_probs_;
    double p_infinite_ = 0.0;
    std::vector<std::uint64_t> edges_;
    std::vector<double> cumulative_;  // running sum of bin_probs_
};

/// Spikes get (1 - epsilon) / |spikes| each, the remaining bins share epsilon.
IrdSpec fgen(std::size_t k, std::vector<std::size_t> spikes, double epsilon);

/// General stepwise spec; weights are normalized together with inf_weight.
IrdSpec stepwise(std::vector<double> weights, double inf_weight = 0.0);

/// Histogram rows may arrive unsorted and with gaps; gaps become empty bins.
IrdSpec empirical_ird(std::vector<IrdRow> rows, double inf_count);

/// Fixes t_max so that the probability-weighted mean of bin midpoints of the
/// finite part equals `footprint_m`:
///     t_max = ceil(2 M k / sum_{i=1..k} (2i - 1) f(i))
/// with f normalized over the finite mass. Empirical specs are already in
/// absolute IRD units and are returned unchanged.
IrdSpec auto_tune_tmax(IrdSpec spec, std::uint64_t footprint_m);

/// Returns kInfiniteIrd with probability p_infinite, otherwise an integer drawn
/// uniformly from a bin chosen with probability bin_probs[j].
std::uint64_t sample_ird(const IrdSpec& spec, Rng& rng);

// ---------------------------------------------------------------------------
// IRM (item popularity) distributions
// ---------------------------------------------------------------------------

struct Zipf {
    double alpha = 1.2;
    bool operator==(const Zipf&) const = default;
};
struct Pareto {
    double alpha = 1.0;
    double x_m = 1.0;
    bool operator==(const Pareto&) const = default;
};
struct Normal {
    double mu = 0.0;
    double sigma = 1.0;
    bool operator==(const Normal&) const = default;
};
struct Uniform {
    bool operator==(const Uniform&) const = default;
};
struct EmpiricalCounts {
    std::vector<double> counts;
    bool operator==(const EmpiricalCounts&) const = default;
};

using IrmFamily = std::variant<Zipf, Pareto, Normal, Uniform, EmpiricalCounts>;

/// Normalized item-popularity PMF over a finite universe. Sampled indices are
/// 0-based; rank i in the PMF formulas (1-based) maps to index i - 1.
class IrmSpec {
public:
    const IrmFamily& family() const noexcept { return family_; }
    std::uint64_t universe_size() const noexcept { return universe_; }

    /// Probability of 0-based index i.
    double pmf(std::uint64_t index) const;

private:
    friend IrmSpec build_irm(const IrmFamily&, std::uint64_t);
    friend std::uint64_t sample_item(const IrmSpec&, Rng&);

    IrmFamily family_;
    std::uint64_t universe_ = 0;
    double total_weight_ = 0.0;
    std::vector<double> cumulative_;  // empty for Uniform
};

/// Empirical families define their own universe (the number of counts);
/// `universe_size` is ignored for them.
IrmSpec build_irm(const IrmFamily& family, std::uint64_t universe_size);

std::uint64_t sample_item(const IrmSpec& spec, Rng& rng);

}  // namespace tracegen
