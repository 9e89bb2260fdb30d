#include "tracegen/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "tracegen/errors.hpp"

namespace tracegen {

namespace {

std::vector<double> running_sum(const std::vector<double>& probs, double start) {
    std::vector<double> cumulative(probs.size());
    double acc = start;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        acc += probs[j];
        cumulative[j] = acc;
    }
    return cumulative;
}

void require_finite_nonnegative(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0)
        throw ValidationError(std::string(what) + " must be finite and non-negative");
}

// Rank is 1-based.
double irm_weight(const IrmFamily& family, std::uint64_t rank) {
    const double i = static_cast<double>(rank);
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Zipf>) {
                return std::pow(i, -f.alpha);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return i < std::ceil(f.x_m) ? 0.0 : std::pow(f.x_m / i, f.alpha);
            } else if constexpr (std::is_same_v<T, Normal>) {
                const double z = (i - f.mu) / f.sigma;
                return std::exp(-0.5 * z * z);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return 1.0;
            } else {
                return f.counts.at(rank - 1);
            }
        },
        family);
}

void validate_family(const IrmFamily& family, std::uint64_t universe) {
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Zipf>) {
                if (!(f.alpha > 0.0) || !std::isfinite(f.alpha))
                    throw ValidationError("zipf: alpha must be > 0");
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (!(f.alpha > 0.0) || !std::isfinite(f.alpha))
                    throw ValidationError("pareto: alpha must be > 0");
                if (!(f.x_m >= 1.0) || !std::isfinite(f.x_m))
                    throw ValidationError("pareto: x_m must be >= 1");
                if (std::ceil(f.x_m) > static_cast<double>(universe))
                    throw ValidationError("pareto: x_m exceeds the universe size");
            } else if constexpr (std::is_same_v<T, Normal>) {
                if (!(f.sigma > 0.0) || !std::isfinite(f.sigma))
                    throw ValidationError("normal: sigma must be > 0");
                if (!std::isfinite(f.mu)) throw ValidationError("normal: mu must be finite");
            } else if constexpr (std::is_same_v<T, EmpiricalCounts>) {
                if (f.counts.empty()) throw ValidationError("empirical: no counts");
                for (double c : f.counts) require_finite_nonnegative(c, "empirical count");
            }
        },
        family);
}

}  // namespace

// ---------------------------------------------------------------------------
// IRD
// ---------------------------------------------------------------------------

IrdSpec IrdSpec::from_parts(IrdSource source, std::vector<double> bin_probs, double p_infinite,
                            std::vector<std::uint64_t> edges) {
    if (bin_probs.empty()) throw ValidationError("IRD spec needs at least one bin");
    if (!edges.empty()) {
        if (edges.size() != bin_probs.size() + 1 || edges.front() != 0)
            throw ValidationError("IRD spec edges must be k + 1 values starting at 0");
        for (std::size_t j = 0; j + 1 < edges.size(); ++j)
            if (edges[j + 1] <= edges[j])
                throw ValidationError("IRD spec edges must be strictly increasing");
    }
    IrdSpec spec;
    spec.source_ = std::move(source);
    spec.bin_probs_ = std::move(bin_probs);
    spec.p_infinite_ = p_infinite;
    spec.edges_ = std::move(edges);
    spec.cumulative_ = running_sum(spec.bin_probs_, p_infinite);
    return spec;
}

IrdSpec fgen(std::size_t k, std::vector<std::size_t> spikes, double epsilon) {
    if (k == 0) throw ValidationError("fgen: k must be >= 1");
    if (spikes.empty()) throw ValidationError("fgen: spike set is empty");
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw ValidationError("fgen: epsilon must be in [0, 1)");
    std::sort(spikes.begin(), spikes.end());
    if (std::adjacent_find(spikes.begin(), spikes.end()) != spikes.end())
        throw ValidationError("fgen: duplicate spike index");
    if (spikes.back() >= k)
        throw ValidationError("fgen: spike index " + std::to_string(spikes.back()) +
                              " out of range for k = " + std::to_string(k));
    const std::size_t n_spikes = spikes.size();
    if (n_spikes == k && epsilon != 0.0)
        throw ValidationError("fgen: epsilon must be 0 when every bin is a spike");

    const double spike_p = (1.0 - epsilon) / static_cast<double>(n_spikes);
    const double hole_p = n_spikes == k ? 0.0 : epsilon / static_cast<double>(k - n_spikes);
    std::vector<double> probs(k, hole_p);
    for (std::size_t s : spikes) probs[s] = spike_p;

    return IrdSpec::from_parts(FgenSource{k, std::move(spikes), epsilon}, std::move(probs), 0.0, {});
}

IrdSpec stepwise(std::vector<double> weights, double inf_weight) {
    if (weights.empty()) throw ValidationError("stepwise: at least one bin is required");
    double total = inf_weight;
    require_finite_nonnegative(inf_weight, "stepwise inf weight");
    for (double w : weights) {
        require_finite_nonnegative(w, "stepwise weight");
        total += w;
    }
    if (!(total > 0.0)) throw ValidationError("stepwise: all weights are zero");
    std::vector<double> probs(weights.size());
    for (std::size_t j = 0; j < weights.size(); ++j) probs[j] = weights[j] / total;
    return IrdSpec::from_parts(StepwiseSource{std::move(weights), inf_weight}, std::move(probs),
                               inf_weight / total, {});
}

IrdSpec empirical_ird(std::vector<IrdRow> rows, double inf_count) {
    require_finite_nonnegative(inf_count, "inf count");
    double total = inf_count;
    for (const auto& r : rows) {
        if (r.lo == 0 || r.hi < r.lo)
            throw ValidationError("empirical IRD rows need 1 <= lo <= hi");
        require_finite_nonnegative(r.count, "IRD count");
        total += r.count;
    }
    if (!(total > 0.0)) throw ValidationError("empirical IRD histogram is empty");
    std::sort(rows.begin(), rows.end(), [](const IrdRow& a, const IrdRow& b) { return a.lo < b.lo; });

    std::vector<std::uint64_t> edges{0};
    std::vector<double> probs;
    for (const auto& r : rows) {
        const std::uint64_t start = r.lo - 1;
        if (start < edges.back())
            throw ValidationError("empirical IRD rows overlap at " + std::to_string(r.lo));
        if (start > edges.back()) {
            edges.push_back(start);
            probs.push_back(0.0);
        }
        edges.push_back(r.hi);
        probs.push_back(r.count / total);
    }
    if (probs.empty()) {
        edges.push_back(1);
        probs.push_back(0.0);
    }
    return IrdSpec::from_parts(EmpiricalIrdSource{std::move(rows), inf_count}, std::move(probs),
                               inf_count / total, std::move(edges));
}

IrdSpec auto_tune_tmax(IrdSpec spec, std::uint64_t footprint_m) {
    if (spec.is_empirical()) return spec;
    if (footprint_m == 0) throw ValidationError("auto_tune_tmax: footprint must be >= 1");
    const double finite = spec.finite_mass();
    if (!(finite > 0.0)) throw ValidationError("auto_tune_tmax: spec has no finite mass");

    const std::size_t k = spec.k();
    double denom = 0.0;
    for (std::size_t j = 0; j < k; ++j)
        denom += static_cast<double>(2 * j + 1) * (spec.bin_probs()[j] / finite);

    const double exact = 2.0 * static_cast<double>(footprint_m) * static_cast<double>(k) / denom;
    // Ceil, but don't let a last-bit rounding error in the sum bump an exact
    // integer to the next one.
    const double nearest = std::round(exact);
    double t = std::abs(exact - nearest) <= 1e-9 * exact ? nearest : std::ceil(exact);
    auto t_max = static_cast<std::uint64_t>(t);
    t_max = std::max<std::uint64_t>(t_max, k);

    std::vector<std::uint64_t> edges(k + 1);
    for (std::size_t j = 0; j <= k; ++j) {
        // floor(j * t_max / k) without overflowing the product.
        edges[j] = j * (t_max / k) + j * (t_max % k) / k;
    }
    return IrdSpec::from_parts(spec.source(), spec.bin_probs(), spec.p_infinite(), std::move(edges));
}

std::uint64_t sample_ird(const IrdSpec& spec, Rng& rng) {
    if (!spec.has_sample_space())
        throw ValidationError("IRD spec has no sample space; call auto_tune_tmax first");
    const double u = rng.uniform01();
    if (u < spec.p_infinite_) return kInfiniteIrd;
    const auto& cum = spec.cumulative_;
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    std::size_t j;
    if (it == cum.end()) {
        // u landed above the rounded total; use the last bin with mass.
        j = cum.size() - 1;
        while (j > 0 && spec.bin_probs_[j] == 0.0) --j;
    } else {
        j = static_cast<std::size_t>(it - cum.begin());
    }
    return rng.uniform_int(spec.edges_[j] + 1, spec.edges_[j + 1]);
}

// ---------------------------------------------------------------------------
// IRM
// ---------------------------------------------------------------------------

double IrmSpec::pmf(std::uint64_t index) const {
    if (index >= universe_) return 0.0;
    return irm_weight(family_, index + 1) / total_weight_;
}

IrmSpec build_irm(const IrmFamily& family, std::uint64_t universe_size) {
    if (const auto* emp = std::get_if<EmpiricalCounts>(&family)) universe_size = emp->counts.size();
    if (universe_size == 0) throw ValidationError("IRM universe must hold at least one item");
    validate_family(family, universe_size);

    IrmSpec spec;
    spec.family_ = family;
    spec.universe_ = universe_size;
    if (std::holds_alternative<Uniform>(family)) {
        spec.total_weight_ = static_cast<double>(universe_size);
        return spec;
    }
    spec.cumulative_.resize(universe_size);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < universe_size; ++i) {
        acc += irm_weight(family, i + 1);
        spec.cumulative_[i] = acc;
    }
    if (!(acc > 0.0) || !std::isfinite(acc))
        throw ValidationError("IRM distribution has no mass over the universe");
    spec.total_weight_ = acc;
    return spec;
}

std::uint64_t sample_item(const IrmSpec& spec, Rng& rng) {
    if (spec.cumulative_.empty()) return rng.uniform_int(0, spec.universe_ - 1);
    const double target = rng.uniform01() * spec.total_weight_;
    const auto& cum = spec.cumulative_;
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    if (it == cum.end()) {
        std::size_t j = cum.size() - 1;
        while (j > 0 && cum[j] == cum[j - 1]) --j;
        return j;
    }
    return static_cast<std::uint64_t>(it - cum.begin());
}

}  // namespace tracegen
