#include "tracegen/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "tracegen/errors.hpp"

namespace tracegen {

// ---------------------------------------------------------------------------
// IRD measurement
// ---------------------------------------------------------------------------

std::vector<std::uint64_t> inter_reference_distances(std::span<const std::uint64_t> refs) {
    std::vector<std::uint64_t> out(refs.size(), kInfiniteIrd);
    std::unordered_map<std::uint64_t, std::uint64_t> last;
    last.reserve(refs.size());
    for (std::uint64_t j = 0; j < refs.size(); ++j) {
        auto [it, fresh] = last.try_emplace(refs[j], j);
        if (!fresh) {
            out[j] = j - it->second;
            it->second = j;
        }
    }
    return out;
}

std::vector<std::uint64_t> log_edges(std::uint64_t max_ird, std::size_t log_bins) {
    constexpr std::uint64_t kExact = 1024;
    std::vector<std::uint64_t> edges;
    const std::uint64_t exact_top = std::clamp<std::uint64_t>(max_ird, 1, kExact);
    edges.reserve(exact_top + log_bins + 1);
    for (std::uint64_t e = 0; e <= exact_top; ++e) edges.push_back(e);
    if (max_ird <= kExact || log_bins == 0) {
        if (max_ird > kExact) edges.push_back(max_ird);
        return edges;
    }
    const double ratio = std::pow(static_cast<double>(max_ird) / kExact, 1.0 / static_cast<double>(log_bins));
    double x = kExact;
    for (std::size_t i = 1; i < log_bins; ++i) {
        x *= ratio;
        const auto e = std::max(edges.back() + 1, static_cast<std::uint64_t>(std::ceil(x)));
        if (e >= max_ird) break;
        edges.push_back(e);
    }
    edges.push_back(max_ird);
    return edges;
}

IrdHistogram histogram_from_irds(std::span<const std::uint64_t> irds, std::vector<std::uint64_t> edges) {
    if (edges.size() < 2 || edges.front() != 0)
        throw ValidationError("histogram edges must start at 0 and define at least one bin");
    for (std::size_t j = 0; j + 1 < edges.size(); ++j)
        if (edges[j + 1] <= edges[j]) throw ValidationError("histogram edges must be strictly increasing");

    IrdHistogram h;
    h.edges = std::move(edges);
    h.counts.assign(h.edges.size() - 1, 0);
    h.total = irds.size();
    for (auto d : irds) {
        if (d == kInfiniteIrd) {
            ++h.inf_count;
            continue;
        }
        h.max_finite = std::max(h.max_finite, d);
        if (d > h.edges.back()) {
            ++h.overflow;
            continue;
        }
        // First edge >= d closes the bin holding d.
        const auto it = std::lower_bound(h.edges.begin() + 1, h.edges.end(), d);
        ++h.counts[static_cast<std::size_t>(it - h.edges.begin()) - 1];
    }
    return h;
}

IrdHistogram measure_ird(std::span<const std::uint64_t> refs, std::size_t log_bins) {
    const auto irds = inter_reference_distances(refs);
    std::uint64_t max_finite = 0;
    for (auto d : irds)
        if (d != kInfiniteIrd) max_finite = std::max(max_finite, d);
    return histogram_from_irds(irds, log_edges(max_finite, log_bins));
}

IrdHistogram measure_ird(std::span<const std::uint64_t> refs, std::vector<std::uint64_t> edges) {
    return histogram_from_irds(inter_reference_distances(refs), std::move(edges));
}

double total_variation(const IrdHistogram& measured, const IrdSpec& spec) {
    if (measured.edges != spec.edges())
        throw ValidationError("total_variation: histogram is not binned on the spec's edges");
    const double finite = static_cast<double>(measured.finite_count());
    if (!(finite > 0.0)) throw ValidationError("total_variation: histogram has no finite IRDs");
    const double spec_finite = spec.finite_mass();
    double sum = static_cast<double>(measured.overflow) / finite;
    for (std::size_t j = 0; j < measured.counts.size(); ++j) {
        const double observed = static_cast<double>(measured.counts[j]) / finite;
        sum += std::abs(observed - spec.bin_probs()[j] / spec_finite);
    }
    return 0.5 * sum;
}

// ---------------------------------------------------------------------------
// AetModel
// ---------------------------------------------------------------------------

AetModel::AetModel(const IrdHistogram& hist) {
    if (hist.total == 0) throw ValidationError("che_predict: histogram is empty");
    const double total = static_cast<double>(hist.total);
    for (std::size_t j = 0; j < hist.counts.size(); ++j)
        if (hist.counts[j] > 0)
            bins_.push_back({hist.edges[j], hist.edges[j + 1], static_cast<double>(hist.counts[j]) / total});
    if (hist.overflow > 0)
        bins_.push_back({hist.edges.back(), std::max(hist.max_finite, hist.edges.back() + 1),
                         static_cast<double>(hist.overflow) / total});
    p_inf_ = static_cast<double>(hist.inf_count) / total;
    finish();
}

AetModel AetModel::from_spec(const IrdSpec& spec) {
    if (!spec.has_sample_space())
        throw ValidationError("AET model needs a spec with a sample space");
    AetModel model;
    for (std::size_t j = 0; j < spec.k(); ++j)
        if (spec.bin_probs()[j] > 0.0)
            model.bins_.push_back({spec.edges()[j], spec.edges()[j + 1], spec.bin_probs()[j]});
    model.p_inf_ = spec.p_infinite();
    model.finish();
    return model;
}

void AetModel::finish() {
    mass_prefix_.assign(bins_.size() + 1, 0.0);
    mean_prefix_.assign(bins_.size() + 1, 0.0);
    for (std::size_t j = 0; j < bins_.size(); ++j) {
        const auto& b = bins_[j];
        const double mean = 0.5 * static_cast<double>(b.lo + 1 + b.hi);
        mass_prefix_[j + 1] = mass_prefix_[j] + b.mass;
        mean_prefix_[j + 1] = mean_prefix_[j] + b.mass * mean;
    }
    max_tau_ = bins_.empty() ? 0 : bins_.back().hi;
}

double AetModel::cache_size(std::uint64_t tau) const {
    const double t = static_cast<double>(tau);
    // Bins [0, a) lie entirely at or below tau.
    const auto it = std::upper_bound(bins_.begin(), bins_.end(), tau,
                                     [](std::uint64_t v, const Bin& b) { return v < b.hi; });
    const std::size_t a = static_cast<std::size_t>(it - bins_.begin());
    double c = p_inf_ * t + mean_prefix_[a];
    std::size_t above = a;
    if (a < bins_.size() && bins_[a].lo < tau) {
        const auto& b = bins_[a];
        const double lo = static_cast<double>(b.lo), hi = static_cast<double>(b.hi);
        const double density = b.mass / (hi - lo);
        const double below = t - lo;  // values lo+1..tau
        c += density * (below * (lo + 1.0 + t) / 2.0 + (hi - t) * t);
        above = a + 1;
    }
    c += t * (mass_prefix_.back() - mass_prefix_[above]);
    return c;
}

double AetModel::hit_ratio(std::uint64_t tau) const {
    const auto it = std::upper_bound(bins_.begin(), bins_.end(), tau,
                                     [](std::uint64_t v, const Bin& b) { return v < b.hi; });
    const std::size_t a = static_cast<std::size_t>(it - bins_.begin());
    double h = mass_prefix_[a];
    if (a < bins_.size() && bins_[a].lo < tau) {
        const auto& b = bins_[a];
        h += b.mass * static_cast<double>(tau - b.lo) / static_cast<double>(b.hi - b.lo);
    }
    return std::min(h, 1.0);
}

std::uint64_t AetModel::eviction_time(double target) const {
    if (target <= 0.0) return 0;
    std::uint64_t hi = std::max<std::uint64_t>(max_tau_, 1);
    if (cache_size(hi) < target) {
        if (!(p_inf_ > 0.0)) return hi;
        hi += static_cast<std::uint64_t>(std::ceil((target - cache_size(hi)) / p_inf_)) + 1;
    }
    std::uint64_t lo = 0;  // C(lo) < target <= C(hi)
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (cache_size(mid) >= target) hi = mid;
        else lo = mid;
    }
    return hi;
}

// ---------------------------------------------------------------------------
// Che prediction
// ---------------------------------------------------------------------------

HitRatioCurve AetCurve::to_hrc() const {
    HitRatioCurve curve;
    curve.policy = "che";
    curve.footprint = footprint;
    for (const auto& p : points) {
        if (!curve.points.empty() && p.cache_size <= curve.points.back().cache_size) {
            curve.points.back().hit_ratio = std::max(curve.points.back().hit_ratio, p.hit_ratio);
            continue;
        }
        curve.points.push_back({p.cache_size, p.hit_ratio});
    }
    return curve;
}

AetCurve che_predict(const IrdHistogram& hist) {
    const AetModel model(hist);
    const std::uint64_t max_tau = std::max<std::uint64_t>(model.max_tau(), 1);

    constexpr std::uint64_t kDense = 4096;
    std::vector<std::uint64_t> taus;
    for (std::uint64_t t = 1; t <= std::min(max_tau, kDense); ++t) taus.push_back(t);
    if (max_tau > kDense) {
        for (auto e : hist.edges)
            if (e > kDense && e <= max_tau) taus.push_back(e);
        for (double x = kDense * 1.005; x < static_cast<double>(max_tau); x *= 1.005)
            taus.push_back(static_cast<std::uint64_t>(x));
        taus.push_back(max_tau);
        std::sort(taus.begin(), taus.end());
        taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    }

    AetCurve curve;
    curve.footprint = hist.inf_count;
    curve.points.reserve(taus.size());
    for (auto t : taus) curve.points.push_back({t, model.cache_size(t), model.hit_ratio(t)});
    return curve;
}

CacheInterval spike_to_cliff(const IrdSpec& spec, std::size_t spike_bin) {
    if (!spec.has_sample_space()) throw ValidationError("spike_to_cliff: spec has no sample space");
    if (spike_bin >= spec.k())
        throw ValidationError("spike_to_cliff: bin " + std::to_string(spike_bin) + " out of range");
    const auto model = AetModel::from_spec(spec);
    return {model.cache_size(spec.edges()[spike_bin]), model.cache_size(spec.edges()[spike_bin + 1])};
}

// ---------------------------------------------------------------------------
// Curve metrics
// ---------------------------------------------------------------------------

double interpolate_normalized(const HitRatioCurve& curve, double x) {
    if (curve.points.empty()) throw ValidationError("curve has no points");
    if (curve.footprint == 0) throw ValidationError("curve has no footprint to normalize by");
    const double target = x * static_cast<double>(curve.footprint);
    const auto& pts = curve.points;
    if (target <= pts.front().cache_size) return pts.front().hit_ratio;
    if (target >= pts.back().cache_size) return pts.back().hit_ratio;
    const auto it = std::lower_bound(pts.begin(), pts.end(), target,
                                     [](const HitRatioCurve::Point& p, double v) { return p.cache_size < v; });
    const auto& b = *it;
    const auto& a = *std::prev(it);
    const double w = (target - a.cache_size) / (b.cache_size - a.cache_size);
    return a.hit_ratio + w * (b.hit_ratio - a.hit_ratio);
}

std::vector<double> default_mae_grid() {
    std::vector<double> grid(100);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i + 1) / 100.0;
    return grid;
}

double hrc_mae(const HitRatioCurve& a, const HitRatioCurve& b, std::span<const double> grid) {
    if (grid.empty()) throw ValidationError("hrc_mae: empty grid");
    double sum = 0.0;
    for (double x : grid) sum += std::abs(interpolate_normalized(a, x) - interpolate_normalized(b, x));
    return sum / static_cast<double>(grid.size());
}

double concavity_gap(const HitRatioCurve& curve) {
    if (curve.footprint == 0) throw ValidationError("concavity_gap: curve has no footprint");
    struct P {
        double x, y;
    };
    std::vector<P> pts;
    pts.reserve(curve.points.size() + 1);
    if (curve.points.empty() || curve.points.front().cache_size > 0.0) pts.push_back({0.0, 0.0});
    for (const auto& p : curve.points) pts.push_back({curve.normalized(p), p.hit_ratio});
    if (pts.size() < 3) throw ValidationError("concavity_gap: need at least 3 points");

    // Upper hull by monotone chain; x is already sorted.
    std::vector<P> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            const double cross = (a.x - o.x) * (p.y - o.y) - (a.y - o.y) * (p.x - o.x);
            if (cross >= 0.0) hull.pop_back();  // a lies on or below o->p
            else break;
        }
        hull.push_back(p);
    }

    double gap = 0.0;
    std::size_t h = 0;
    for (const auto& p : pts) {
        while (h + 1 < hull.size() && hull[h + 1].x <= p.x) ++h;
        double top = hull[h].y;
        if (h + 1 < hull.size() && p.x > hull[h].x) {
            const auto& a = hull[h];
            const auto& b = hull[h + 1];
            top = a.y + (b.y - a.y) * (p.x - a.x) / (b.x - a.x);
        }
        gap = std::max(gap, top - p.y);
    }
    return gap;
}

}  // namespace tracegen
